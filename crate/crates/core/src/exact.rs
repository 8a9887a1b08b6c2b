//! Exhaustive ground truth for small instances: minimum delta-covers,
//! covering numbers and the optimal k-center radius.
//!
//! Subsets are enumerated by size and then lexicographically, so the
//! reported witness is the lexicographically smallest optimum.

use crate::dataset::SampleId;
use crate::error::{Error, Result};
use crate::oracle::DistanceOracle;

pub const DEFAULT_CAP: usize = 20;
const MAX_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactResult<T> {
    pub optimum: T,
    /// Sorted ascending.
    pub witness: Vec<SampleId>,
    /// Search nodes visited.
    pub explored: u64,
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if cap > MAX_CAP {
        return Err(Error::parameter(format!(
            "exhaustive search supports at most {MAX_CAP} samples"
        )));
    }
    if n > cap {
        return Err(Error::TooLarge { size: n, cap });
    }
    Ok(())
}

fn full_matrix(oracle: &DistanceOracle) -> Result<Vec<Vec<f64>>> {
    let n = oracle.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| oracle.distance(SampleId(i), SampleId(j)))
                .collect()
        })
        .collect()
}

/// Whether every sample has some member of `reps` within `delta`.
pub fn is_cover(oracle: &DistanceOracle, reps: &[SampleId], delta: f64) -> Result<bool> {
    for s in 0..oracle.len() {
        let mut covered = false;
        for &r in reps {
            if oracle.distance(SampleId(s), r)? <= delta {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

struct CoverSearch {
    n: usize,
    /// covers[c]: samples within delta of candidate c
    covers: Vec<u64>,
    /// coverers[s]: candidates within delta of sample s
    coverers: Vec<u64>,
    full: u64,
    explored: u64,
}

impl CoverSearch {
    fn search(&mut self, start: usize, left: usize, covered: u64, picked: &mut Vec<usize>) -> bool {
        self.explored += 1;
        if covered == self.full {
            return true;
        }
        if left == 0 {
            return false;
        }
        // the lowest uncovered sample needs a coverer among the candidates still allowed
        let first_open = (!covered & self.full).trailing_zeros() as usize;
        let allowed = if start >= 64 { 0 } else { !0u64 << start };
        let options = self.coverers[first_open] & allowed;
        if options == 0 {
            return false;
        }
        let last = 63 - options.leading_zeros() as usize;
        for c in start..=last.min(self.n - 1) {
            picked.push(c);
            if self.search(c + 1, left - 1, covered | self.covers[c], picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
}

/// Smallest `C` with `d(x, c) <= delta` for some `c` in `C`, for every `x`.
pub fn exact_min_cover(
    oracle: &DistanceOracle,
    delta: f64,
    cap: usize,
) -> Result<ExactResult<usize>> {
    let n = oracle.len();
    check_cap(n, cap)?;
    let d = full_matrix(oracle)?;
    let mut covers = vec![0u64; n];
    let mut coverers = vec![0u64; n];
    for (x, row) in d.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v <= delta {
                covers[c] |= 1 << x;
                coverers[x] |= 1 << c;
            }
        }
    }
    if let Some(x) = coverers.iter().position(|&m| m == 0) {
        return Err(Error::NoCover {
            delta,
            sample: SampleId(x),
        });
    }
    let full = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut search = CoverSearch {
        n,
        covers,
        coverers,
        full,
        explored: 0,
    };
    for size in 0..=n {
        let mut picked = Vec::with_capacity(size);
        if search.search(0, size, 0, &mut picked) {
            let witness: Vec<SampleId> = picked.into_iter().map(SampleId).collect();
            assert!(is_cover(oracle, &witness, delta)?, "exact witness must cover");
            return Ok(ExactResult {
                optimum: size,
                witness,
                explored: search.explored,
            });
        }
    }
    unreachable!("the full set is a cover once every sample has a coverer")
}

/// Covering number `N(x)`: size of the smallest cover at threshold `x`.
pub fn covering_number(oracle: &DistanceOracle, x: f64, cap: usize) -> Result<usize> {
    exact_min_cover(oracle, x, cap).map(|r| r.optimum)
}

/// `min over |R| = k of max_s min_{r in R} d(s, r)`.
pub fn opt_max_for_k(oracle: &DistanceOracle, k: usize, cap: usize) -> Result<ExactResult<f64>> {
    let n = oracle.len();
    check_cap(n, cap)?;
    if k == 0 || k > n {
        return Err(Error::parameter(format!("k must lie in 1..={n}, got {k}")));
    }
    let d = full_matrix(oracle)?;

    struct KSearch<'a> {
        d: &'a [Vec<f64>],
        n: usize,
        best: Option<(f64, Vec<usize>)>,
        explored: u64,
    }
    impl KSearch<'_> {
        fn go(&mut self, start: usize, left: usize, nearest: &[f64], picked: &mut Vec<usize>) {
            self.explored += 1;
            if left == 0 {
                let radius = nearest.iter().copied().fold(0.0, f64::max);
                if self.best.as_ref().is_none_or(|(b, _)| radius < *b) {
                    self.best = Some((radius, picked.clone()));
                }
                return;
            }
            for c in start..=self.n - left {
                let next: Vec<f64> = nearest
                    .iter()
                    .enumerate()
                    .map(|(s, &v)| v.min(self.d[s][c]))
                    .collect();
                picked.push(c);
                self.go(c + 1, left - 1, &next, picked);
                picked.pop();
            }
        }
    }

    let mut search = KSearch {
        d: &d,
        n,
        best: None,
        explored: 0,
    };
    search.go(0, k, &vec![f64::INFINITY; n], &mut Vec::with_capacity(k));
    let (radius, picked) = search.best.expect("k <= n gives at least one subset");
    let witness: Vec<SampleId> = picked.into_iter().map(SampleId).collect();
    assert!(is_cover(oracle, &witness, radius)?, "exact witness must reach its radius");
    Ok(ExactResult {
        optimum: radius,
        witness,
        explored: search.explored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::DistanceMatrix;

    fn line(points: &[f64]) -> DistanceOracle {
        let p = points.to_vec();
        DistanceOracle::from_fn(p.len(), move |a, b| (p[a.0] - p[b.0]).abs())
    }

    fn ids(v: &[usize]) -> Vec<SampleId> {
        v.iter().map(|&i| SampleId(i)).collect()
    }

    /// Plain enumeration of all 2^n subsets, without pruning.
    fn brute_min_cover(o: &DistanceOracle, delta: f64) -> (usize, Vec<SampleId>) {
        let n = o.len();
        let mut best: Option<(usize, Vec<SampleId>)> = None;
        for mask in 0u32..(1 << n) {
            let set: Vec<SampleId> = (0..n).filter(|i| mask >> i & 1 == 1).map(SampleId).collect();
            if is_cover(o, &set, delta).unwrap() {
                let better = match &best {
                    None => true,
                    Some((size, w)) => set.len() < *size || (set.len() == *size && set < *w),
                };
                if better {
                    best = Some((set.len(), set));
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn line_examples() {
        let o = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let r = exact_min_cover(&o, 1.0, DEFAULT_CAP).unwrap();
        assert_eq!((r.optimum, r.witness), (2, ids(&[0, 3])));
        assert_eq!(covering_number(&o, 0.5, DEFAULT_CAP).unwrap(), 5);
        assert_eq!(covering_number(&o, 0.0, DEFAULT_CAP).unwrap(), 5);
        assert_eq!(covering_number(&o, 4.0, DEFAULT_CAP).unwrap(), 1);

        let r = exact_min_cover(&line(&[0.0]), 0.0, DEFAULT_CAP).unwrap();
        assert_eq!((r.optimum, r.witness), (1, ids(&[0])));
        let r = exact_min_cover(&o, 10.0, DEFAULT_CAP).unwrap();
        assert_eq!((r.optimum, r.witness), (1, ids(&[0])));

        let r = exact_min_cover(&line(&[]), 1.0, DEFAULT_CAP).unwrap();
        assert_eq!(r.optimum, 0);
    }

    #[test]
    fn k_center_examples() {
        let r = opt_max_for_k(&line(&[0.0, 1.0, 2.0]), 1, DEFAULT_CAP).unwrap();
        assert_eq!((r.optimum, r.witness), (1.0, ids(&[1])));
        let o = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let r = opt_max_for_k(&o, 2, DEFAULT_CAP).unwrap();
        assert_eq!((r.optimum, r.witness), (1.0, ids(&[0, 3])));
        // root, four first picks, ten pairs
        assert_eq!(r.explored, 1 + 4 + 10);
        assert_eq!(opt_max_for_k(&o, 5, DEFAULT_CAP).unwrap().optimum, 0.0);
    }

    #[test]
    fn refusals() {
        let big = line(&(0..21).map(f64::from).collect::<Vec<_>>());
        assert!(matches!(
            exact_min_cover(&big, 1.0, DEFAULT_CAP),
            Err(Error::TooLarge { size: 21, cap: 20 })
        ));
        assert!(matches!(opt_max_for_k(&big, 2, DEFAULT_CAP), Err(Error::TooLarge { .. })));
        assert!(opt_max_for_k(&line(&[0.0]), 2, DEFAULT_CAP).is_err());

        let m = DistanceMatrix::from_rows(vec![vec![2.0, 3.0], vec![0.5, 2.0]]).unwrap();
        let o = DistanceOracle::from_matrix(m);
        assert!(matches!(
            exact_min_cover(&o, 1.0, DEFAULT_CAP),
            Err(Error::NoCover { sample: SampleId(0), .. })
        ));
    }

    #[test]
    fn pruned_search_matches_plain_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let n = rng.gen_range(1..=9);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 0.0 } else { rng.gen_range(0.0..10.0) }).collect())
                .collect();
            let o = DistanceOracle::from_matrix(DistanceMatrix::from_rows(rows).unwrap());
            let delta = rng.gen_range(0.0..8.0);
            let fast = exact_min_cover(&o, delta, DEFAULT_CAP).unwrap();
            assert_eq!((fast.optimum, fast.witness), brute_min_cover(&o, delta));
        }
    }
}
