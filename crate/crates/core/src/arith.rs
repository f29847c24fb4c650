//! Small exact-arithmetic helpers shared by the analysis modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Residue of a big integer modulo a machine-sized modulus.
pub fn mod_u64(x: &BigUint, modulus: u64) -> u64 {
    assert!(modulus > 0, "modulus must be positive");
    (x % modulus).to_u64().expect("residue fits u64")
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Histogram of `(start + i * step) mod modulus` for `i` in `0..count`.
///
/// The residue sequence is periodic with period `modulus / gcd(step, modulus)`,
/// so the work is `O(modulus)` regardless of `count`.
pub fn progression_histogram(start: u64, step: u64, count: &BigUint, modulus: u64) -> Vec<BigUint> {
    let mut hist = vec![BigUint::zero(); modulus as usize];
    add_progression(&mut hist, start, step, count, modulus);
    hist
}

/// Accumulates [`progression_histogram`] into `hist` (length `modulus`).
pub fn add_progression(hist: &mut [BigUint], start: u64, step: u64, count: &BigUint, modulus: u64) {
    debug_assert_eq!(hist.len() as u64, modulus);
    if count.is_zero() {
        return;
    }
    let start = start % modulus;
    let step = step % modulus;
    if count.is_one() {
        hist[start as usize] += 1u32;
        return;
    }
    let period = modulus / gcd_u64(step, modulus);
    let full = count / period;
    let rem = mod_u64(count, period);
    let mut r = start;
    for i in 0..period {
        if !full.is_zero() {
            hist[r as usize] += &full;
        }
        if i < rem {
            hist[r as usize] += 1u32;
        }
        r = ((r as u128 + step as u128) % modulus as u128) as u64;
    }
}

/// Converts `num / den` to the nearest-ish `f64` without going through
/// lossy intermediate conversions of huge operands.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient carries at least 64 significant bits.
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = 64 - (nb - db);
    let q = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    let mant = q.to_f64().expect("finite");
    mant * 2f64.powi(-shift as i32)
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    let neg = x.is_negative();
    let num = x.numer().abs().to_biguint().expect("nonnegative");
    let den = x.denom().to_biguint().expect("positive");
    let v = ratio_to_f64(&num, &den);
    if neg {
        -v
    } else {
        v
    }
}

pub fn rational(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn rational_int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact decimal string when the expansion terminates, `num/den` otherwise.
pub fn format_rational(x: &BigRational) -> String {
    let mut den = x.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", x.numer(), x.denom());
    }
    let digits = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = x.numer() * &scale / x.denom();
    let neg = scaled.is_negative();
    let mut s = scaled.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

/// Floats with 12 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{:.11e}", x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(start: u64, step: u64, count: u64, m: u64) -> Vec<u64> {
        let mut h = vec![0u64; m as usize];
        for i in 0..count {
            h[((start + i * step) % m) as usize] += 1;
        }
        h
    }

    #[test]
    fn progression_matches_naive_enumeration() {
        for m in 1..=13u64 {
            for step in 0..(2 * m) {
                for start in 0..m {
                    for count in [0u64, 1, 2, 5, 13, 29] {
                        let got = progression_histogram(start, step, &BigUint::from(count), m);
                        let want = naive(start, step, count, m);
                        let got: Vec<u64> = got.iter().map(|x| x.to_u64().unwrap()).collect();
                        assert_eq!(got, want, "start={start} step={step} count={count} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn ratio_conversion_is_accurate_for_huge_operands() {
        let big = BigUint::from(5u32).pow(60);
        let v = ratio_to_f64(&(&big / 3u32), &big);
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(ratio_to_f64(&BigUint::from(1u32), &BigUint::from(4u32)), 0.25);
    }

    #[test]
    fn rationals_format_as_decimals_when_terminating() {
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(format_rational(&r(1, 4)), "0.25");
        assert_eq!(format_rational(&r(1, 3)), "1/3");
        assert_eq!(format_rational(&r(3, 1)), "3");
        assert_eq!(format_rational(&r(-1, 50)), "-0.02");
        assert_eq!(format_rational(&r(1, 12)), "1/12");
    }
}
