#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub const D: f64 = 16.4e3;

/// Fractional bits of the fixed-point Bessel series.
const FRAC_BITS: u32 = 512;

/// Splits a finite `f64` into `(p, q)` with `x = p / 2^q` exactly.
fn exact_dyadic(x: f64) -> (BigInt, u32) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let mant = if exp == 0 { (bits & ((1 << 52) - 1)) << 1 } else { (bits & ((1 << 52) - 1)) | (1 << 52) };
    // x = mant · 2^(exp − 1075)
    let e = exp - 1075;
    let p = BigInt::from(sign) * BigInt::from(mant);
    if e >= 0 {
        (p << e as u32, 0)
    } else {
        (p, (-e) as u32)
    }
}

/// `J_n(x)` from the power series `Σ_k (−1)^k (x/2)^{2k+n} / (k!(k+n)!)`
/// summed in 512-bit fixed point, so cancellation between large terms costs
/// nothing. Independent of the crate's recurrence.
pub fn bessel_oracle(n: i32, x: f64) -> f64 {
    let order = n.unsigned_abs();
    // x/2 = p / 2^q
    let (p, q) = exact_dyadic(x);
    let q = q + 1;
    let one = BigInt::from(1) << FRAC_BITS;
    let mut term = one.clone() * p.pow(order);
    let mut denom = BigInt::from(1) << (q * order);
    for k in 1..=order {
        denom *= k;
    }
    term /= denom;
    let p2 = &p * &p;
    let shift = 2 * q;
    let mut sum = term.clone();
    let floor = BigInt::from(1) << (FRAC_BITS - 300);
    let half = x.abs() / 2.0;
    let mut k = 0u64;
    loop {
        k += 1;
        term = -(term * &p2) / (BigInt::from(k) * BigInt::from(k + order as u64));
        term >>= shift;
        // arithmetic shift floors negatives; one unit of 2^-512 is irrelevant
        sum += &term;
        if (k as f64) > half && term.abs() < floor {
            break;
        }
    }
    let value = fixed_to_f64(&sum);
    if n < 0 && order % 2 == 1 {
        -value
    } else {
        value
    }
}

fn fixed_to_f64(v: &BigInt) -> f64 {
    let keep = 96;
    let shifted: BigInt = v >> (FRAC_BITS - keep);
    shifted.to_f64().expect("finite") / 2f64.powi(keep as i32)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
