//! Binomial coefficients under the convention `C(a, b) = 0` whenever
//! `b < 0`, `b > a` or `a < 0`, so every level-count formula is total.

use rug::Integer;

/// `C(a, b)` for signed arguments with the zero convention. Panics on `u64`
/// overflow, which cannot happen for the ground-set sizes used here.
pub fn binom_i(a: i64, b: i64) -> u64 {
    if a < 0 || b < 0 || b > a {
        return 0;
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

pub fn binom(a: u32, b: u32) -> u64 {
    binom_i(a as i64, b as i64)
}

pub fn binom_big(a: u32, b: u32) -> Integer {
    if b > a {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convention_and_values() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(2, 5), 0);
        assert_eq!(binom_i(3, -1), 0);
        assert_eq!(binom_i(-1, 0), 0);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(24, 12), 2_704_156);
        assert_eq!(binom_big(30, 15), 155_117_520u64);
        assert_eq!(binom_big(3, 4), 0);
    }

    #[test]
    fn pascal_rule() {
        for a in 1..30i64 {
            for b in 0..=a {
                assert_eq!(binom_i(a, b), binom_i(a - 1, b) + binom_i(a - 1, b - 1));
            }
        }
    }
}
