use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Grid used for rationals that are not dyadic.
const DEFAULT_EXP: u32 = 256;

/// Closed interval `[lo, hi]·2^-exp` with integer mantissas.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    exp: u32,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", to_f64(&self.lo()), to_f64(&self.hi()))
    }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn big(q: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Interval {
    fn raw(lo: BigInt, hi: BigInt, exp: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi, exp }
    }

    /// Outward enclosure of `[lo, hi]` on the grid `2^-exp`.
    pub fn from_rationals(lo: &BigRational, hi: &BigRational, exp: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        let s = pow2(exp);
        let l = (lo.numer() * &s).div_floor(lo.denom());
        let h = ceil_div(&(hi.numer() * &s), hi.denom());
        Interval::raw(l, h, exp)
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        let exp = dyadic_exp(&lo).max(dyadic_exp(&hi));
        Self::from_rationals(&lo, &hi, exp)
    }

    /// Exact for dyadic rationals, otherwise rounded outward to `2^-256`.
    pub fn point(q: BigRational) -> Self {
        Self::new(q.clone(), q)
    }

    pub fn rational(q: Rational64) -> Self {
        Self::point(big(q))
    }

    pub fn int(n: i64) -> Self {
        Interval::raw(n.into(), n.into(), 0)
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.exp))
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.exp))
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, pow2(self.exp))
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, pow2(self.exp + 1))
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        let n = q.numer() * pow2(self.exp);
        &self.lo * q.denom() <= n && n <= &self.hi * q.denom()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn at(&self, exp: u32) -> (BigInt, BigInt) {
        let k = exp - self.exp;
        (&self.lo << k, &self.hi << k)
    }

    fn aligned(&self, o: &Interval) -> (BigInt, BigInt, BigInt, BigInt, u32) {
        let e = self.exp.max(o.exp);
        let (a, b) = self.at(e);
        let (c, d) = o.at(e);
        (a, b, c, d, e)
    }

    /// Ordering when certain: disjoint intervals or equal points.
    pub fn cmp_certain(&self, other: &Interval) -> Option<Ordering> {
        let (a, b, c, d, _) = self.aligned(other);
        if b < c {
            Some(Ordering::Less)
        } else if a > d {
            Some(Ordering::Greater)
        } else if a == b && c == d && a == c {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Outward rounding to the grid `2^-prec`.
    pub fn round(&self, prec: u32) -> Self {
        if prec >= self.exp {
            return self.clone();
        }
        let s = pow2(self.exp - prec);
        Interval::raw(self.lo.div_floor(&s), ceil_div(&self.hi, &s), prec)
    }

    /// Exactly the grid `2^-exp`: refined when coarser, rounded outward when finer.
    pub fn regrid(&self, exp: u32) -> Self {
        if exp >= self.exp {
            let (lo, hi) = self.at(exp);
            Interval::raw(lo, hi, exp)
        } else {
            self.round(exp)
        }
    }

    pub fn add(&self, o: &Interval) -> Self {
        let (a, b, c, d, e) = self.aligned(o);
        Interval::raw(a + c, b + d, e)
    }

    pub fn sub(&self, o: &Interval) -> Self {
        let (a, b, c, d, e) = self.aligned(o);
        Interval::raw(a - d, b - c, e)
    }

    pub fn neg(&self) -> Self {
        Interval::raw(-&self.hi, -&self.lo, self.exp)
    }

    /// Product, rounded outward to the finer of the two grids.
    pub fn mul(&self, o: &Interval) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::raw(lo, hi, self.exp + o.exp).round(self.exp.max(o.exp))
    }

    /// Multiplication by an exact rational, on the current grid.
    pub fn scale(&self, q: &BigRational) -> Self {
        let (mut lo, mut hi) = (&self.lo * q.numer(), &self.hi * q.numer());
        if q.is_negative() {
            std::mem::swap(&mut lo, &mut hi);
        }
        let d = q.denom();
        Interval::raw(lo.div_floor(d), ceil_div(&hi, d), self.exp)
    }

    /// `None` when the interval contains zero. The result carries eight
    /// more bits than the input.
    pub fn recip(&self) -> Option<Self> {
        if !(self.lo.is_positive() || self.hi.is_negative()) {
            return None;
        }
        let e = self.exp + 8;
        let num = pow2(self.exp + e);
        Some(Interval::raw(num.div_floor(&self.hi), ceil_div(&num, &self.lo), e))
    }

    pub fn div(&self, o: &Interval) -> Option<Self> {
        o.recip().map(|r| self.mul(&r))
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            Interval::raw(BigInt::zero(), std::cmp::max(-&self.lo, self.hi.clone()), self.exp)
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            self.clone()
        }
    }

    fn magnitude(&self) -> Interval {
        let m = std::cmp::max(self.lo.abs(), self.hi.abs());
        Interval::raw(m.clone(), m, self.exp)
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        a.mul(&a)
    }

    pub fn hull(&self, o: &Interval) -> Self {
        let (a, b, c, d, e) = self.aligned(o);
        Interval::raw(a.min(c), b.max(d), e)
    }

    /// Widening by the upper end of `e`.
    fn widen(&self, e: &Interval) -> Self {
        let (a, b, _, d, x) = self.aligned(e);
        Interval::raw(a - &d, b + d, x)
    }

    fn clamp_unit(self) -> Self {
        let one = pow2(self.exp);
        let lo = std::cmp::max(self.lo, -one.clone());
        let hi = std::cmp::min(self.hi, one);
        Interval::raw(lo, hi, self.exp)
    }

    /// Enclosure of π from Machin's formula.
    pub fn pi(prec: u32) -> Self {
        let g = prec + 16;
        let a = atan_inv(5, g);
        let b = atan_inv(239, g);
        a.scale(&BigRational::from_integer(16.into())).sub(&b.scale(&BigRational::from_integer(4.into()))).round(prec)
    }

    /// `q·π` for rational `q`.
    pub fn pi_mul(q: Rational64, prec: u32) -> Self {
        Self::pi(prec + 8).scale(&big(q)).round(prec)
    }

    /// Taylor series in interval arithmetic; meant for |x| ≤ 4.
    pub fn sin(&self, prec: u32) -> Self {
        series(self, prec, true)
    }

    pub fn cos(&self, prec: u32) -> Self {
        series(self, prec, false)
    }

    /// `sin(qπ)` with the argument first reduced to `[-1/2, 1/2]`.
    pub fn sin_pi(q: Rational64, prec: u32) -> Self {
        let two = Rational64::from_integer(2);
        // reduce modulo 2 into (-1, 1]
        let mut x = q - two * (q / two).floor();
        if x > Rational64::one() {
            x -= two;
        }
        // sin(π - x) = sin x
        let half = Rational64::new(1, 2);
        if x > half {
            x = Rational64::one() - x;
        } else if x < -half {
            x = -Rational64::one() - x;
        }
        if x.is_zero() {
            return Interval::int(0);
        }
        if x.abs() == half {
            return Interval::int(x.signum().to_integer());
        }
        if x.abs() == Rational64::new(1, 6) {
            return Interval::rational(Rational64::new(x.signum().to_integer(), 2));
        }
        Self::pi_mul(x, prec + 8).sin(prec)
    }

    pub fn cos_pi(q: Rational64, prec: u32) -> Self {
        Self::sin_pi(Rational64::new(1, 2) - q, prec)
    }

    /// The `θ ∈ [lo_pi·π, π/2]` with `sin θ = y`, by bisection on the
    /// increasing branch. Requires `sin(lo_pi·π) ≤ y ≤ 1`.
    pub fn asin_on(y: &Interval, lo_pi: Rational64, prec: u32) -> Self {
        let pi = Self::pi(prec + 8).round(prec);
        let start = pi.scale(&big(lo_pi)).lo;
        let end = ceil_div(&pi.hi, &BigInt::from(2));
        let y_lo = Interval::raw(y.lo.clone(), y.lo.clone(), y.exp);
        let y_hi = Interval::raw(y.hi.clone(), y.hi.clone(), y.exp);
        // sin is flat near π/2, so resolving θ to 2^-prec needs about twice the bits
        let sin_at = |m: &BigInt| Interval::raw(m.clone(), m.clone(), prec).sin(2 * prec + 8);
        let (mut a, mut b) = (start.clone(), end.clone());
        while &b - &a > BigInt::one() {
            let c: BigInt = (&a + &b) >> 1;
            if sin_at(&c).cmp_certain(&y_lo) == Some(Ordering::Less) {
                a = c;
            } else {
                b = c;
            }
        }
        let low = a;
        let (mut a, mut b) = (start, end);
        while &b - &a > BigInt::one() {
            let c: BigInt = (&a + &b) >> 1;
            if sin_at(&c).cmp_certain(&y_hi) == Some(Ordering::Greater) {
                b = c;
            } else {
                a = c;
            }
        }
        Interval::raw(low, b, prec)
    }
}

/// Smallest `e` with `q·2^e` an integer, or the default grid.
fn dyadic_exp(q: &BigRational) -> u32 {
    let d = q.denom();
    if (d & (d - BigInt::one())).is_zero() {
        d.bits() as u32 - 1
    } else {
        DEFAULT_EXP
    }
}

fn atan_inv(n: i64, g: u32) -> Interval {
    let one = pow2(g);
    let n2 = BigInt::from(n * n);
    let mut pow = BigInt::from(n);
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut k: i64 = 0;
    loop {
        let den = &pow * BigInt::from(2 * k + 1);
        let t_lo = one.div_floor(&den);
        let t_hi = ceil_div(&one, &den);
        if t_hi <= BigInt::one() {
            // alternating with decreasing terms: the tail is within one term
            return Interval::raw(lo - BigInt::one(), hi + BigInt::one(), g);
        }
        if k.is_even() {
            lo += t_lo;
            hi += t_hi;
        } else {
            lo -= t_hi;
            hi -= t_lo;
        }
        pow *= &n2;
        k += 1;
    }
}

fn series(x: &Interval, prec: u32, sine: bool) -> Interval {
    let g = prec + 16;
    let x = x.regrid(g + 8);
    let x2 = x.square().regrid(g + 8);
    let m = x.magnitude().to_f64();
    let tiny = Interval::raw(BigInt::one(), BigInt::one(), g);
    let mut term = if sine { x.clone() } else { Interval::int(1).regrid(g + 8) };
    let mut sum = Interval::int(0);
    let mut k: i64 = if sine { 1 } else { 0 };
    let mut sign = true;
    loop {
        sum = if sign { sum.add(&term) } else { sum.sub(&term) };
        let d = BigRational::from_integer(((k + 1) * (k + 2)).into());
        term = term.mul(&x2).scale(&d.recip()).regrid(g + 8);
        k += 2;
        sign = !sign;
        let bound = term.magnitude();
        // once k exceeds |x| the terms decrease and the tail is below the next one
        if k as f64 > m + 1.0 && bound.cmp_certain(&tiny) == Some(Ordering::Less) {
            return sum.widen(&bound).round(prec).clamp_unit();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bq(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pi_enclosure() {
        let p = Interval::pi(200);
        assert!(p.width() <= BigRational::new(BigInt::one(), pow2(196)));
        assert!((p.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn trig_against_f64() {
        for (p, q) in [(1, 12), (1, 7), (2, 7), (5, 14), (3, 10), (-1, 5), (9, 7), (1, 3)] {
            let x = Rational64::new(p, q);
            let s = Interval::sin_pi(x, 80);
            let c = Interval::cos_pi(x, 80);
            let f = std::f64::consts::PI * p as f64 / q as f64;
            assert!((s.to_f64() - f.sin()).abs() < 1e-14, "{p}/{q}");
            assert!((c.to_f64() - f.cos()).abs() < 1e-14, "{p}/{q}");
            let one = s.square().add(&c.square());
            assert!(one.contains(&bq(1, 1)));
            assert!(s.width() < bq(1, 1 << 40));
        }
    }

    #[test]
    fn asin_inverts_sin() {
        let y = Interval::sin_pi(Rational64::new(2, 5), 100);
        let t = Interval::asin_on(&y, Rational64::new(1, 3), 60);
        assert!((t.to_f64() - 0.4 * std::f64::consts::PI).abs() < 1e-12);
        let one = Interval::asin_on(&Interval::int(1), Rational64::new(1, 3), 60);
        assert!((one.to_f64() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn certain_ordering() {
        let a = Interval::rational(Rational64::new(1, 4));
        let b = Interval::sin_pi(Rational64::new(1, 9), 60);
        assert_eq!(a.cmp_certain(&b), Some(Ordering::Less));
        assert_eq!(a.cmp_certain(&a), Some(Ordering::Equal));
        assert_eq!(b.cmp_certain(&b), None);
    }

    #[test]
    fn non_dyadic_points_are_enclosed() {
        let third = Interval::rational(Rational64::new(1, 3));
        assert!(third.contains(&bq(1, 3)));
        assert!(!third.is_point());
        let r = Interval::int(3).recip().unwrap();
        assert!(r.contains(&bq(1, 3)));
    }
}
