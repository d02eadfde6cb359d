//! Exact scalars for the symbolic layers.
//!
//! Values live in a cyclotomic field `Q(ζ_N)`, stored in the power basis
//! reduced modulo the `N`-th cyclotomic polynomial. This covers the rationals,
//! the roots of unity needed for finite gauge averages, and square roots of
//! positive integers (which are Gauss sums). A tagged floating variant exists
//! for interop; any operation that touches it produces a float, and float
//! comparisons use [`FLOAT_TOLERANCE`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Comparison tolerance applied whenever a floating value is involved.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Cyclotomic(Cyclotomic),
    Float(Complex64),
}

/// An element of `Q(ζ_order)` that is not rational. Coefficients are in the
/// basis `1, ζ, …, ζ^{φ(order)-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, low degree first.
fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = div_monic(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for k in (dn..num.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        quot[k - dn] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[k - dn + j] -= &c * dj;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Reduces `poly` modulo the monic polynomial `modulus`.
fn reduce(mut poly: Vec<BigRational>, modulus: &[BigInt]) -> Vec<BigRational> {
    let deg = modulus.len() - 1;
    if poly.len() < deg {
        poly.resize(deg, BigRational::zero());
        return poly;
    }
    for k in (deg..poly.len()).rev() {
        let c = poly[k].clone();
        if c.is_zero() {
            continue;
        }
        for (j, mj) in modulus.iter().enumerate() {
            if !mj.is_zero() {
                poly[k - deg + j] -= &c * BigRational::from_integer(mj.clone());
            }
        }
    }
    poly.truncate(deg);
    poly
}

/// Builds `Σ c · ζ_order^e` from (exponent, coefficient) pairs.
fn from_powers(order: u64, terms: impl IntoIterator<Item = (u64, BigRational)>) -> Scalar {
    let mut poly = vec![BigRational::zero(); order as usize];
    for (e, c) in terms {
        poly[(e % order) as usize] += c;
    }
    let modulus = cyclotomic_poly(order);
    normalize(order, reduce(poly, &modulus))
}

fn normalize(order: u64, coeffs: Vec<BigRational>) -> Scalar {
    if coeffs.iter().skip(1).all(Zero::is_zero) {
        Scalar::Rational(coeffs.into_iter().next().unwrap_or_else(BigRational::zero))
    } else {
        Scalar::Cyclotomic(Cyclotomic { order, coeffs })
    }
}

impl Cyclotomic {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn terms(&self) -> impl Iterator<Item = (u64, BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u64, c.clone()))
    }

    /// Power-basis coefficients after embedding into `Q(ζ_target)`.
    fn lift(&self, target: u64) -> Vec<BigRational> {
        let step = target / self.order;
        let mut poly = vec![BigRational::zero(); target as usize];
        for (k, c) in self.terms() {
            poly[((k * step) % target) as usize] += c;
        }
        reduce(poly, &cyclotomic_poly(target))
    }

    fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.terms() {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
            z += Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN);
        }
        z
    }
}

/// Exact view of a scalar as a (order, power-basis coefficients) pair.
fn exact_parts(s: &Scalar) -> Option<(u64, Vec<BigRational>)> {
    match s {
        Scalar::Rational(q) => Some((1, vec![q.clone()])),
        Scalar::Cyclotomic(c) => Some((c.order, c.coeffs.clone())),
        Scalar::Float(_) => None,
    }
}

fn lift_parts(order: u64, coeffs: &[BigRational], target: u64) -> Vec<BigRational> {
    if order == 1 {
        let mut v = vec![BigRational::zero(); euler_phi(target) as usize];
        v[0] = coeffs[0].clone();
        v
    } else if order == target {
        coeffs.to_vec()
    } else {
        Cyclotomic { order, coeffs: coeffs.to_vec() }.lift(target)
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `num / den`. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn float(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    /// `ζ_m^j` with `ζ_m = exp(2πi/m)`.
    pub fn root_of_unity(m: u64, j: i64) -> Self {
        assert!(m > 0);
        let e = j.rem_euclid(m as i64) as u64;
        from_powers(m, [(e, BigRational::one())])
    }

    /// The positive square root of `n`, exactly, as an element of a
    /// cyclotomic field.
    pub fn sqrt(n: u64) -> Self {
        assert!(n > 0, "sqrt of zero is not needed here");
        let mut square = 1i64;
        let mut result = Scalar::one();
        let mut m = n;
        let mut p = 2u64;
        while m > 1 {
            if p * p > m {
                // m is prime
                result = &result * &sqrt_prime(m);
                break;
            }
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            square *= (p as i64).pow(e / 2);
            if e % 2 == 1 {
                result = &result * &sqrt_prime(p);
            }
            p += 1;
        }
        &result * &Scalar::from_int(square)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Cyclotomic(_) => false,
            Scalar::Float(z) => z.norm() <= FLOAT_TOLERANCE,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Cyclotomic(_) => false,
            Scalar::Float(z) => (z - Complex64::new(1.0, 0.0)).norm() <= FLOAT_TOLERANCE,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Rational(q) => Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Cyclotomic(c) => c.to_complex(),
            Scalar::Float(z) => *z,
        }
    }

    /// Complex modulus as a float.
    pub fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.clone()),
            Scalar::Cyclotomic(c) => {
                let order = c.order;
                from_powers(order, c.terms().map(|(k, v)| ((order - k) % order, v)))
            }
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, d: i64) -> Self {
        self * &Scalar::ratio(1, d)
    }

    /// Absolute difference, as a float, used by deviation reports.
    pub fn distance(&self, other: &Scalar) -> f64 {
        if self.exactly_equal(other) {
            0.0
        } else {
            (self.to_complex() - other.to_complex()).norm()
        }
    }

    fn exactly_equal(&self, other: &Scalar) -> bool {
        match (exact_parts(self), exact_parts(other)) {
            (Some((oa, ca)), Some((ob, cb))) => {
                if oa == 1 && ob == 1 {
                    return ca[0] == cb[0];
                }
                let target = oa.lcm(&ob);
                lift_parts(oa, &ca, target) == lift_parts(ob, &cb, target)
            }
            _ => false,
        }
    }

    fn combine(
        &self,
        other: &Scalar,
        exact: impl Fn(&[BigRational], &[BigRational], &[BigInt]) -> Vec<BigRational>,
        float: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Scalar {
        match (exact_parts(self), exact_parts(other)) {
            (Some((oa, ca)), Some((ob, cb))) => {
                let target = oa.lcm(&ob);
                let modulus = cyclotomic_poly(target);
                let la = lift_parts(oa, &ca, target);
                let lb = lift_parts(ob, &cb, target);
                normalize(target, exact(&la, &lb, &modulus))
            }
            _ => Scalar::Float(float(self.to_complex(), other.to_complex())),
        }
    }
}

fn sqrt_prime(p: u64) -> Scalar {
    if p == 2 {
        // ζ_8 + ζ_8^{-1}
        return from_powers(8, [(1, BigRational::one()), (7, BigRational::one())]);
    }
    // Quadratic Gauss sum g = Σ (a/p) ζ_p^a, with g = √p for p ≡ 1 (mod 4)
    // and g = i√p for p ≡ 3 (mod 4).
    let terms = (1..p).map(|a| {
        let sign = if legendre(a, p) == 1 { 1 } else { -1 };
        (a, BigRational::from_integer(BigInt::from(sign)))
    });
    let g = from_powers(p, terms);
    if p % 4 == 1 {
        g
    } else {
        &g * &Scalar::root_of_unity(4, -1)
    }
}

fn legendre(a: u64, p: u64) -> i32 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.is_exact() && other.is_exact() {
            self.exactly_equal(other)
        } else {
            (self.to_complex() - other.to_complex()).norm() <= FLOAT_TOLERANCE
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, rhs) {
            return Scalar::Rational(a + b);
        }
        self.combine(
            rhs,
            |a, b, _| a.iter().zip(b).map(|(x, y)| x + y).collect(),
            |a, b| a + b,
        )
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, rhs) {
            return Scalar::Rational(a * b);
        }
        self.combine(
            rhs,
            |a, b, modulus| {
                let mut prod = vec![BigRational::zero(); a.len() + b.len()];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            prod[i + j] += x * y;
                        }
                    }
                }
                reduce(prod, modulus)
            },
            |a, b| a * b,
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(Cyclotomic {
                order: c.order,
                coeffs: c.coeffs.iter().map(|x| -x).collect(),
            }),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rational(q)
    }
}

impl fmt::Display for Scalar {
    /// Rationals print as `p` or `p/q`; cyclotomic values as
    /// `zN:[c0,c1,…]` in the power basis; floats as `f:re,im`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Cyclotomic(c) => {
                write!(f, "z{}:[", c.order)?;
                for (k, x) in c.coeffs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Scalar::Float(z) => write!(f, "f:{:e},{:e}", z.re, z.im),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("f:") {
            let (re, im) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad float scalar {s:?}")))?;
            let re: f64 = re.parse().map_err(|_| Error::Parse(format!("bad float {re:?}")))?;
            let im: f64 = im.parse().map_err(|_| Error::Parse(format!("bad float {im:?}")))?;
            return Ok(Scalar::float(re, im));
        }
        if let Some(rest) = s.strip_prefix('z') {
            let (order, body) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad cyclotomic scalar {s:?}")))?;
            let order: u64 = order
                .parse()
                .map_err(|_| Error::Parse(format!("bad cyclotomic order {order:?}")))?;
            let body = body
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("bad cyclotomic body {s:?}")))?;
            let coeffs = body.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
            if order == 0 || coeffs.len() as u64 != euler_phi(order) {
                return Err(Error::Parse(format!("cyclotomic coefficient count mismatch in {s:?}")));
            }
            return Ok(from_powers(order, coeffs.into_iter().enumerate().map(|(k, c)| (k as u64, c))));
        }
        parse_rational(s).map(Scalar::Rational)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact absolute value of a rational scalar.
pub fn rational_abs(s: &Scalar) -> Option<BigRational> {
    s.as_rational().map(|q| q.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |n| cyclotomic_poly(n).iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn square_roots_are_exact() {
        for n in 1..=30u64 {
            let r = Scalar::sqrt(n);
            assert_eq!(&r * &r, Scalar::from_int(n as i64), "sqrt({n})^2");
            let z = r.to_complex();
            assert!((z.re - (n as f64).sqrt()).abs() < 1e-9 && z.im.abs() < 1e-9, "sqrt({n}) = {z}");
        }
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for m in 2..=12u64 {
            let mut acc = Scalar::zero();
            for j in 0..m as i64 {
                acc = &acc + &Scalar::root_of_unity(m, j);
            }
            assert!(acc.is_zero(), "sum of {m}-th roots = {acc}");
            let z = Scalar::root_of_unity(m, 1);
            assert!(z.pow(m as u32).is_one());
            assert!((&z * &z.conj()).is_one());
        }
    }

    #[test]
    fn mixed_orders_combine() {
        let i = Scalar::root_of_unity(4, 1);
        let w = Scalar::root_of_unity(3, 1);
        let prod = &i * &w;
        assert_eq!(prod, Scalar::root_of_unity(12, 3 + 4));
        assert_eq!(&prod - &prod, Scalar::zero());
        assert_eq!(Scalar::root_of_unity(2, 1), Scalar::from_int(-1));
    }

    #[test]
    fn floats_compare_with_tolerance() {
        let a = Scalar::float(0.5, 0.0);
        assert_eq!(a, Scalar::ratio(1, 2));
        assert_ne!(Scalar::float(0.5 + 1e-9, 0.0), Scalar::ratio(1, 2));
        assert!(!(&a + &Scalar::one()).is_exact());
    }

    #[test]
    fn display_round_trip() {
        for s in [
            Scalar::ratio(-3, 7),
            Scalar::sqrt(2),
            Scalar::sqrt(3),
            Scalar::root_of_unity(5, 2),
            Scalar::float(0.25, -1.5),
        ] {
            let text = s.to_string();
            let back: Scalar = text.parse().unwrap();
            assert_eq!(back, s, "{text}");
        }
    }
}
