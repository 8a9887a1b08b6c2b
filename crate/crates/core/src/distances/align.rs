//! Global (Needleman-Wunsch) and local (Smith-Waterman) alignment over
//! arbitrary token sequences, in linear space.

/// Substitution cost between tokens plus gap pricing.
///
/// For local alignment a matched pair earns `local_offset - cost(a, b)` and
/// a gap costs `gap`, so pairs cheaper than the offset count as similar.
#[derive(Clone, Copy)]
pub struct SubstitutionModel<F> {
    pub cost: F,
    pub gap: f64,
    pub local_offset: f64,
}

impl<F> SubstitutionModel<F> {
    /// A model whose local reward offset equals the gap penalty.
    pub fn new(cost: F, gap: f64) -> Self {
        SubstitutionModel {
            cost,
            gap,
            local_offset: gap,
        }
    }

    pub fn with_local_offset(mut self, offset: f64) -> Self {
        self.local_offset = offset;
        self
    }
}

/// Minimum total cost of a global alignment of `s` and `t`.
pub fn global_alignment<T, F>(s: &[T], t: &[T], model: &SubstitutionModel<F>) -> f64
where
    F: Fn(&T, &T) -> f64,
{
    let gap = model.gap;
    let mut prev: Vec<f64> = Vec::with_capacity(t.len() + 1);
    prev.push(0.0);
    for j in 0..t.len() {
        prev.push(prev[j] + gap);
    }
    let mut cur = vec![0.0; t.len() + 1];
    for a in s {
        cur[0] = prev[0] + gap;
        for (j, b) in t.iter().enumerate() {
            let diag = prev[j] + (model.cost)(a, b);
            let up = prev[j + 1] + gap;
            let left = cur[j] + gap;
            cur[j + 1] = diag.min(up).min(left);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()]
}

/// Best local-alignment score `H*` (never below 0).
pub fn local_similarity<T, F>(s: &[T], t: &[T], model: &SubstitutionModel<F>) -> f64
where
    F: Fn(&T, &T) -> f64,
{
    let gap = model.gap;
    let mut prev = vec![0.0f64; t.len() + 1];
    let mut cur = vec![0.0f64; t.len() + 1];
    let mut best = 0.0f64;
    for a in s {
        for (j, b) in t.iter().enumerate() {
            let reward = model.local_offset - (model.cost)(a, b);
            let h = (prev[j] + reward)
                .max(prev[j + 1] - gap)
                .max(cur[j] - gap)
                .max(0.0);
            cur[j + 1] = h;
            best = best.max(h);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    best
}

/// Local alignment as a distance in `(0, 1]`: `1 / (1 + H*)`. Sequences with
/// no rewarding pair score exactly 1.
pub fn local_alignment<T, F>(s: &[T], t: &[T], model: &SubstitutionModel<F>) -> f64
where
    F: Fn(&T, &T) -> f64,
{
    1.0 / (1.0 + local_similarity(s, t, model))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(a: &char, b: &char) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn global_examples() {
        let m = SubstitutionModel::new(unit, 1.5);
        assert_eq!(global_alignment(&chars("abc"), &chars("abc"), &m), 0.0);
        assert_eq!(global_alignment(&chars("AB"), &chars("B"), &m), 1.5);
        assert_eq!(global_alignment(&chars("AC"), &chars("BC"), &m), 1.0);
        assert_eq!(global_alignment(&chars(""), &chars("abcd"), &m), 6.0);
        assert_eq!(global_alignment(&chars("abc"), &chars(""), &m), 4.5);
    }

    #[test]
    fn local_examples() {
        let m = SubstitutionModel::new(unit, 1.5);
        // one matching pair earns 1.5
        assert_eq!(local_similarity(&chars("xay"), &chars("a"), &m), 1.5);
        assert_eq!(local_alignment(&chars("a"), &chars("a"), &m), 0.4);
        // every pair costs more than the offset
        let harsh = SubstitutionModel::new(|_: &char, _: &char| 2.0, 1.5);
        assert_eq!(local_alignment(&chars("abc"), &chars("abc"), &harsh), 1.0);
        assert_eq!(local_alignment::<char, _>(&[], &chars("abc"), &m), 1.0);
    }
}
