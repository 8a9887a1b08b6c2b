//! Order-independent summation.
//!
//! Iteration costs are compared with exact `<=`, so totals must not depend on
//! the order in which per-sample distances are added.

/// Correctly rounded sum of `values` (Shewchuk's partials, as in Python's
/// `math.fsum`). Inputs are assumed finite.
pub fn exact_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in values {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }

    let Some(mut hi) = partials.pop() else {
        return 0.0;
    };
    let mut lo = 0.0;
    while let Some(y) = partials.pop() {
        let x = hi;
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    // half-way case: push the rounding in the direction of the remaining partials
    if let Some(&next) = partials.last() {
        if (lo < 0.0 && next < 0.0) || (lo > 0.0 && next > 0.0) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
    }
    hi
}

/// Mixes a base seed with two stream indices (splitmix64 finalizer), giving
/// well-separated seeds for restarts, repetitions and shuffles.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Formats `x` like C's `%.17g`: 17 significant digits, which is always
/// enough to parse back the identical `f64`.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        trim_fraction(format!("{:.*}", (16 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa.to_string()), exp.abs())
    }
}

fn trim_fraction(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g17_matches_printf() {
        assert_eq!(format_g17(0.225), "0.22500000000000001");
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(-2.5), "-2.5");
        assert_eq!(format_g17(123456.0), "123456");
        assert_eq!(format_g17(1e20), "1e+20");
        assert_eq!(format_g17(1.5e-7), "1.4999999999999999e-07");
        assert_eq!(format_g17(0.0001), "0.0001");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(f64::NAN), "NaN");
    }

    #[test]
    fn seeds_differ_per_stream() {
        assert_ne!(derive_seed(0, 0, 1), derive_seed(0, 1, 0));
        assert_eq!(derive_seed(5, 2, 3), derive_seed(5, 2, 3));
    }

    #[test]
    fn cancels_exactly() {
        assert_eq!(exact_sum([1e100, 1.0, -1e100]), 1.0);
        assert_eq!(exact_sum([0.1; 10]), 1.0);
        assert_eq!(exact_sum(std::iter::empty()), 0.0);
    }

    proptest! {
        #[test]
        fn g17_round_trips(x in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
            prop_assert_eq!(format_g17(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }

        #[test]
        fn order_does_not_matter(mut xs in prop::collection::vec(0.0f64..1e6, 0..40), seed in any::<u64>()) {
            let a = exact_sum(xs.iter().copied());
            let n = xs.len();
            if n > 1 {
                xs.rotate_left((seed as usize) % n);
                xs.swap(0, (seed as usize / 7) % n);
            }
            prop_assert_eq!(a.to_bits(), exact_sum(xs.iter().copied()).to_bits());
        }
    }
}
