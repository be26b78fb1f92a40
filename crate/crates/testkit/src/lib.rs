//! Reference values computed in binary fixed point with several hundred
//! fractional bits, for use as test oracles.
//!
//! Nothing here shares code with `rossby-core`: the formulas are written in
//! their textbook form, without the rearrangements the core uses for double
//! precision.

pub mod fixtures;

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional bits carried by every [`Real`].
pub const FRAC_BITS: u32 = 384;

/// A real number `n / 2^FRAC_BITS`; the absolute resolution is about 2.5e-116.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Real(BigInt);

impl Real {
    pub fn zero() -> Self {
        Real(BigInt::zero())
    }

    pub fn int(v: i64) -> Self {
        Real(BigInt::from(v) << FRAC_BITS)
    }

    /// Exact conversion.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "cannot represent {v}");
        if v == 0.0 {
            return Real::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let mut n = BigInt::from(mantissa) * sign;
        let shift = exp + i64::from(FRAC_BITS);
        if shift >= 0 {
            n <<= shift as usize;
        } else {
            n >>= (-shift) as usize;
        }
        Real(n)
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 significant bits before handing over to the float conversion
        let bits = self.0.bits() as i64;
        let drop = (bits - 64).max(0);
        let head = (&self.0 >> drop as usize).to_f64().unwrap_or(f64::NAN);
        head * 2f64.powi((drop - i64::from(FRAC_BITS)) as i32)
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Real::int(num) / Real::int(den)
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn half(&self) -> Self {
        Real(&self.0 >> 1)
    }

    pub fn div_int(&self, d: i64) -> Self {
        Real(&self.0 / d)
    }

    pub fn mul_int(&self, m: i64) -> Self {
        Real(&self.0 * m)
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Real::int(1), |acc, _| &acc * self)
    }

    /// True when `|self| < 2^-bits`.
    fn below(&self, bits: u32) -> bool {
        self.0.abs().bits() < u64::from(FRAC_BITS.saturating_sub(bits))
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative number");
        Real((&self.0 << FRAC_BITS).sqrt())
    }

    pub fn exp(&self) -> Self {
        // halve until small, sum the series, square back
        let mut r = self.clone();
        let mut halvings = 0;
        while !r.below(8) {
            r = r.half();
            halvings += 1;
        }
        let mut sum = Real::int(1);
        let mut term = Real::int(1);
        for k in 1.. {
            term = (&term * &r).div_int(k);
            if term.0.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        for _ in 0..halvings {
            sum = &sum * &sum;
        }
        sum
    }

    pub fn sinh(&self) -> Self {
        let e = self.exp();
        (&e - &(Real::int(1) / &e)).half()
    }

    pub fn cosh(&self) -> Self {
        let e = self.exp();
        (&e + &(Real::int(1) / &e)).half()
    }

    pub fn sin(&self) -> Self {
        let r = reduce(self);
        let mut sum = r.clone();
        let mut term = r.clone();
        let r2 = &r * &r;
        for k in 1i64.. {
            term = -(&term * &r2).div_int((2 * k) * (2 * k + 1));
            if term.0.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        sum
    }

    pub fn cos(&self) -> Self {
        let r = reduce(self);
        let mut sum = Real::int(1);
        let mut term = Real::int(1);
        let r2 = &r * &r;
        for k in 1i64.. {
            term = -(&term * &r2).div_int((2 * k - 1) * (2 * k));
            if term.0.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        sum
    }
}

/// `x` reduced modulo `2 pi` into `[-pi, pi]`.
fn reduce(x: &Real) -> Real {
    let two_pi = pi().mul_int(2);
    let turns = (x / &two_pi).0 + (BigInt::one() << (FRAC_BITS - 1));
    let turns = turns >> FRAC_BITS;
    x - &Real(two_pi.0 * turns)
}

fn atan_inv(n: i64) -> Real {
    let mut power = Real::ratio(1, n);
    let mut sum = power.clone();
    let n2 = n * n;
    for k in 1i64.. {
        power = -power.div_int(n2);
        let term = power.div_int(2 * k + 1);
        if term.0.is_zero() {
            break;
        }
        sum = &sum + &term;
    }
    sum
}

pub fn pi() -> Real {
    static PI: OnceLock<Real> = OnceLock::new();
    PI.get_or_init(|| &atan_inv(5).mul_int(16) - &atan_inv(239).mul_int(4)).clone()
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real::from_f64(v)
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        Real(&self.0 + &rhs.0)
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        Real(&self.0 - &rhs.0)
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        Real((&self.0 * &rhs.0) >> FRAC_BITS)
    }
}

impl Div for &Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        assert!(!rhs.0.is_zero(), "division by zero");
        Real((&self.0 << FRAC_BITS) / &rhs.0)
    }
}

macro_rules! by_value {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Real {
            type Output = Real;
            fn $f(self, rhs: Real) -> Real {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $f(self, rhs: &Real) -> Real {
                (&self).$f(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $f(self, rhs: Real) -> Real {
                self.$f(&rhs)
            }
        }
    )*};
}
by_value!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-&self.0)
    }
}

fn factorial(n: u32) -> Real {
    Real(Real::int(1).0 * (1..=u64::from(n)).fold(BigInt::one(), |acc, k| acc * k))
}

/// `J_m(x)` from its power series.
pub fn bessel_j(m: u32, x: &Real) -> Real {
    let half = x.half();
    let q = &half * &half;
    let mut term = half.powi(m) / factorial(m);
    let mut sum = term.clone();
    for k in 1i64.. {
        term = -(&term * &q).div_int(k * (k + i64::from(m)));
        if term.0.is_zero() && Real::from_f64(k as f64) > half {
            break;
        }
        sum = &sum + &term;
    }
    sum
}

pub fn bessel_j_f64(m: u32, x: f64) -> f64 {
    bessel_j(m, &Real::from_f64(x)).to_f64()
}

/// `dJ_m/dx = (J_{m-1} - J_{m+1}) / 2`, with `J_{-1} = -J_1`.
pub fn bessel_j_prime_f64(m: u32, x: f64) -> f64 {
    let x = Real::from_f64(x);
    let lower = if m == 0 { -bessel_j(1, &x) } else { bessel_j(m - 1, &x) };
    (lower - bessel_j(m + 1, &x)).half().to_f64()
}

/// Zero of `J_m` inside a sign-changing bracket, to about 1e-30.
pub fn bessel_zero_in(m: u32, lo: f64, hi: f64) -> Real {
    bisect(|x| bessel_j(m, x), Real::from_f64(lo), Real::from_f64(hi))
}

/// Bisection on a bracket `[a, b]` with a sign change, 110 halvings.
pub fn bisect(f: impl Fn(&Real) -> Real, mut a: Real, mut b: Real) -> Real {
    let fa_negative = f(&a).is_negative();
    assert_ne!(fa_negative, f(&b).is_negative(), "bracket has no sign change");
    for _ in 0..110 {
        let mid = (&a + &b).half();
        if f(&mid).is_negative() == fa_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    (a + b).half()
}

/// Numerator and denominator of the boundary-fixing constant `M` for
/// families 2 to 9, written out directly. For family 9 the pair is the
/// fraction in `M = 1 - numerator / denominator`.
pub fn m_parts(family: u8, kz: f64, k: f64, h: f64) -> (Real, Real) {
    let (kz, k, h) = (Real::from(kz), Real::from(k), Real::from(h));
    let a = &kz * &h;
    let b = &k * &h;
    let (sa, ca, sha, cha) = (a.sin(), a.cos(), a.sinh(), a.cosh());
    let (sb, cb, shb, chb) = (b.sin(), b.cos(), b.sinh(), b.cosh());
    match family {
        2 => (
            &kz * &ca * &cb - &kz * &ca + &k * &sa * &sb,
            &k * &sa * &cb - &kz * &ca * &sb,
        ),
        3 => (&kz * &sa, &kz * &sa * &cb - &k * &ca * &sb),
        4 => (
            &cha * &kz * &cb - &cha * &kz + &sha * &k * &sb,
            -(&cha * &kz * &sb) + &k * &sha * &cb,
        ),
        5 => (
            -(&cha * &kz * &chb) + &cha * &kz + &sha * &k * &shb,
            -(&cha * &kz * &shb) + &k * &sha * &chb,
        ),
        6 => (sha.mul_int(2) - &cha * &kz * &h, &sha - &cha * &kz * &h),
        7 => (&sha * &kz, &sha * &kz * &cb + &k * &cha * &sb),
        8 => (&sha * &kz, -(&sha * &kz * &chb) + &k * &cha * &shb),
        9 => (cha.mul_int(2), &sha * &h * &kz),
        _ => panic!("family {family} has no M"),
    }
}

pub fn m_value(family: u8, kz: f64, k: f64, h: f64) -> Real {
    let (num, den) = m_parts(family, kz, k, h);
    let q = num / den;
    if family == 9 {
        Real::int(1) - q
    } else {
        q
    }
}

/// `K` from `kz` and `kr` for the families that define it.
pub fn k_of(family: u8, kz: f64, kr: f64) -> Real {
    let (kz, kr) = (Real::from(kz), Real::from(kr));
    let k2 = match family {
        2 | 3 => &kz * &kz + &kr * &kr,
        4 | 7 => &kr * &kr - &kz * &kz,
        5 | 8 => &kz * &kz - &kr * &kr,
        _ => panic!("family {family} has no K"),
    };
    k2.sqrt()
}

/// Family 3 boundary operator divided by `dF/dx`.
pub fn family3_bc_factor(beta: f64, kz: f64, k: f64, m: &Real, z: f64) -> Real {
    let (beta, kz, k, z) = (Real::from(beta), Real::from(kz), Real::from(k), Real::from(z));
    let (a, b) = (&kz * &z, &k * &z);
    let inner = m * (&kz * a.sin() * b.cos() - &k * a.cos() * b.sin()) - &kz * a.sin();
    beta / (&k * &k) * inner
}

/// Family 6 boundary operator divided by `dF/dx`.
pub fn family6_bc_factor(beta: f64, kz: f64, h: f64, m: &Real, z: f64) -> Real {
    let (beta, kz, h, z) = (Real::from(beta), Real::from(kz), Real::from(h), Real::from(z));
    let a = &kz * &z;
    let (sh, ch) = (a.sinh(), a.cosh());
    let inner = -(&ch * &kz * &z * &z) + &ch * &kz * &h * m * &z + (&sh * &z).mul_int(2) - &sh * &h * m;
    -(beta * inner).half()
}

/// Family 9 zonal coefficient `-beta z^2 / 2 + beta H^2 M / 2 - V`.
pub fn family9_zonal(beta: f64, h: f64, v: f64, m: &Real, z: f64) -> Real {
    let (beta, h, v, z) = (Real::from(beta), Real::from(h), Real::from(v), Real::from(z));
    (-(&beta * &z * &z) + &beta * &h * &h * m).half() - v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for v in [1.0, -2.5, 1e-30, 123456.789, -7.0e15] {
            assert_eq!(Real::from_f64(v).to_f64(), v);
        }
    }

    #[test]
    fn constants() {
        assert_eq!(pi().to_f64(), std::f64::consts::PI);
        assert_eq!(Real::int(1).exp().to_f64(), std::f64::consts::E);
        let two = Real::int(2);
        assert_eq!(two.sqrt().to_f64(), std::f64::consts::SQRT_2);
        let s = Real::int(3).sin();
        let c = Real::int(3).cos();
        let one = &s * &s + &c * &c;
        assert!((one - Real::int(1)).below(370));
        assert_eq!(Real::int(-40).sin().to_f64(), (-40f64).sin());
    }

    #[test]
    fn bessel_values() {
        // tabulated values
        assert_eq!(bessel_j_f64(0, 0.0), 1.0);
        assert!((bessel_j_f64(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-16);
        assert!((bessel_j_f64(1, 10.0) - 0.043_472_746_168_861_44).abs() < 1e-16);
        let z = bessel_zero_in(0, 2.0, 3.0).to_f64();
        assert_eq!(z, 2.404_825_557_695_773);
    }

    #[test]
    fn m_reference() {
        // family 3 with kz = kr = H = 1
        let k = k_of(3, 1.0, 1.0).to_f64();
        let m = m_value(3, 1.0, k, 1.0).to_f64();
        assert!((m - -1.349_521_866_937_38).abs() < 1e-15);
        assert!((m_value(9, 1.0, 0.0, 1.0).to_f64() - -1.626_070_570_998_662_6).abs() < 1e-15);
    }
}


