//! Arithmetic in `Z[sqrt a]` for `a = 2, 3 (mod 4)` and the unit
//! construction of integral points on the curves `C_p` of
//! `(x^2 - a y^2) t = y - 1`, where `x^2 - a y^2 = +-p`.

use crate::arith::{
    is_perfect_square, is_prime, is_square_free, legendre, mod_inv, multiplicative_order,
    primes_up_to, reduce_mod, sqrt_mod,
};
use crate::exact;
use crate::points::{is_solution, MPoint, SurfaceModel};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PellError {
    #[error("a = {0} must be at least 2")]
    TooSmall(i64),
    #[error("a = {0} is not square-free")]
    NotSquareFree(i64),
    #[error("a = {0} is congruent to {1} mod 4; only a = 2, 3 (mod 4) is supported")]
    BadResidue(i64, i64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{p} does not split in Q(sqrt {a})")]
    NotSplit { a: i64, p: u64 },
    #[error("pi = {pi} does not lie in the prime (p, sqrt a - {r}) above {p}")]
    PiNotInPrime { pi: String, p: u64, r: u64 },
    #[error("units do not reach 2r modulo the prime above {0}")]
    NotSurjective(u64),
    #[error("found only {found} usable primes below {bound}, wanted {wanted}")]
    InsufficientPrimes { wanted: usize, found: usize, bound: u64 },
    #[error("point {0} failed verification")]
    Verification(String),
}

/// `u + v sqrt(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    #[serde(with = "exact::bigint")]
    pub u: BigInt,
    #[serde(with = "exact::bigint")]
    pub v: BigInt,
    pub a: i64,
}

impl QuadInt {
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>, a: i64) -> Self {
        QuadInt {
            u: u.into(),
            v: v.into(),
            a,
        }
    }

    pub fn one(a: i64) -> Self {
        QuadInt::new(1, 0, a)
    }

    pub fn norm(&self) -> BigInt {
        &self.u * &self.u - BigInt::from(self.a) * &self.v * &self.v
    }

    pub fn conj(&self) -> Self {
        QuadInt {
            u: self.u.clone(),
            v: -&self.v,
            a: self.a,
        }
    }

    pub fn neg(&self) -> Self {
        QuadInt {
            u: -&self.u,
            v: -&self.v,
            a: self.a,
        }
    }

    pub fn mul(&self, other: &QuadInt) -> Self {
        debug_assert_eq!(self.a, other.a);
        let a = BigInt::from(self.a);
        QuadInt {
            u: &self.u * &other.u + a * &self.v * &other.v,
            v: &self.u * &other.v + &self.v * &other.u,
            a: self.a,
        }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = QuadInt::one(self.a);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Exact sign of the real number `u + v sqrt(a)` (for `a > 0`).
    pub fn signum(&self) -> Ordering {
        let su = self.u.sign();
        let sv = self.v.sign();
        use num_bigint::Sign::*;
        match (su, sv) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
            (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
            // Opposite signs: compare u^2 with a v^2.
            (Plus, Minus) => (&self.u * &self.u).cmp(&(BigInt::from(self.a) * &self.v * &self.v)),
            (Minus, Plus) => (BigInt::from(self.a) * &self.v * &self.v).cmp(&(&self.u * &self.u)),
        }
    }

    /// Is `u + v sqrt(a) > 1`?
    pub fn gt_one(&self) -> bool {
        QuadInt::new(&self.u - 1, self.v.clone(), self.a).signum() == Ordering::Greater
    }

    /// The image in `Z/p` under `sqrt(a) -> r`.
    pub fn reduce(&self, r: u64, p: u64) -> u64 {
        reduce_mod(&(&self.u + &self.v * BigInt::from(r)), p)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.u, -&self.v, self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.u, self.v, self.a)
        }
    }
}

fn check_field(a: i64) -> Result<(), PellError> {
    if a < 2 {
        return Err(PellError::TooSmall(a));
    }
    if !is_square_free(a) {
        return Err(PellError::NotSquareFree(a));
    }
    let r = a.rem_euclid(4);
    if r != 2 && r != 3 {
        return Err(PellError::BadResidue(a, r));
    }
    Ok(())
}

/// The least unit `> 1` of `Z[sqrt a]`, from the continued fraction of
/// `sqrt a`.
pub fn fundamental_unit(a: i64) -> Result<QuadInt, PellError> {
    check_field(a)?;
    let a0 = (a as u64).sqrt() as i64;
    let (mut m, mut d, mut ak) = (0i64, 1i64, a0);
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(a0));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    loop {
        let cand = QuadInt::new(p.clone(), q.clone(), a);
        if cand.norm().abs().is_one() {
            return Ok(cand);
        }
        m = d * ak - m;
        d = (a - m * m) / d;
        ak = (a0 + m) / d;
        let big = BigInt::from(ak);
        let p_next = &big * &p + &p_prev;
        let q_next = &big * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

/// An odd prime `p` that splits, a root `r` of `a` mod `p`, and `pi` of norm
/// `+-p` lying in the prime `(p, sqrt a - r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPrimeDatum {
    pub p: u64,
    pub r: u64,
    pub pi: QuadInt,
}

impl SplitPrimeDatum {
    /// Choose `r` so that `pi` lies in `(p, sqrt a - r)`.
    pub fn from_pi(p: u64, pi: QuadInt) -> Result<Self, PellError> {
        let v = reduce_mod(&pi.v, p);
        let inv = mod_inv(v as i64, p).ok_or_else(|| PellError::PiNotInPrime {
            pi: pi.to_string(),
            p,
            r: 0,
        })?;
        let u = reduce_mod(&pi.u, p);
        let r = ((p - u) % p) as u128 * inv as u128 % p as u128;
        Ok(SplitPrimeDatum { p, r: r as u64, pi })
    }

    pub fn validate(&self) -> Result<(), PellError> {
        let a = self.pi.a;
        if self.p < 3 || !is_prime(self.p) {
            return Err(PellError::NotOddPrime(self.p));
        }
        let r2 = (self.r as u128 * self.r as u128 % self.p as u128) as u64;
        let ok_root = r2 == reduce_mod(&BigInt::from(a), self.p) && self.r != 0;
        let ok_norm = self.pi.norm().abs() == BigInt::from(self.p);
        if !ok_root || !ok_norm || self.pi.reduce(self.r, self.p) != 0 {
            return Err(PellError::PiNotInPrime {
                pi: self.pi.to_string(),
                p: self.p,
                r: self.r,
            });
        }
        Ok(())
    }
}

/// Does `<-1, eps mod p>` fill `(Z/p)^*`? The answer does not depend on which
/// root of `a` is used, since the two images multiply to `N(eps) = +-1`.
pub fn unit_reduction_surjective(eps: &QuadInt, r: u64, p: u64) -> bool {
    let g = eps.reduce(r, p);
    let Some(ord) = multiplicative_order(g, p) else {
        return false;
    };
    // -1 lies in <g> iff ord is even.
    let size = if ord % 2 == 0 { ord } else { 2 * ord };
    size == p - 1
}

/// Some `u + v sqrt a` with `|u^2 - a v^2| = p`, found by scanning `v` up to
/// the size forced by the norm one unit. `None` means no element was found
/// in that range.
pub fn solve_norm_equation(a: i64, p: u64) -> Result<Option<QuadInt>, PellError> {
    check_field(a)?;
    if p < 3 || !is_prime(p) {
        return Err(PellError::NotOddPrime(p));
    }
    if legendre(&BigInt::from(a), p) != 1 {
        return Ok(None);
    }
    let eps = fundamental_unit(a)?;
    let eps1 = if eps.norm().is_one() { eps } else { eps.mul(&eps) };
    const CAP: u64 = 1_000_000;
    let limit = (&eps1.v * BigInt::from(p).sqrt() + 2u32)
        .to_u64()
        .unwrap_or(CAP)
        .min(CAP);
    let (ab, pb) = (BigInt::from(a), BigInt::from(p));
    for v in 0..=limit {
        let av2 = &ab * BigInt::from(v) * BigInt::from(v);
        for target in [&av2 + &pb, &av2 - &pb] {
            if is_perfect_square(&target) {
                return Ok(Some(QuadInt::new(target.sqrt(), v, a)));
            }
        }
    }
    Ok(None)
}

/// Primes `p <= bound` where the unit reduction is surjective, each with a
/// solved `pi`. Primes where no `pi` turns up are left out.
pub fn surjective_primes(a: i64, bound: u64) -> Result<Vec<SplitPrimeDatum>, PellError> {
    let eps = fundamental_unit(a)?;
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        if p == 2 || a % p as i64 == 0 {
            continue;
        }
        let Some(r) = sqrt_mod(&BigInt::from(a), p) else {
            continue;
        };
        if !unit_reduction_surjective(&eps, r, p) {
            continue;
        }
        if let Some(pi) = solve_norm_equation(a, p)? {
            out.push(SplitPrimeDatum::from_pi(p, pi)?);
        }
    }
    Ok(out)
}

/// An integral point on `C_p`, written `x + y sqrt a = sign * eps^k * conj(pi)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    #[serde(with = "exact::bigint")]
    pub x: BigInt,
    #[serde(with = "exact::bigint")]
    pub y: BigInt,
    #[serde(with = "exact::bigint")]
    pub t: BigInt,
    pub unit_power: u64,
    pub sign: i8,
}

impl CurvePoint {
    pub fn to_mpoint(&self) -> MPoint {
        MPoint::from_big(self.x.clone(), self.y.clone(), self.t.clone())
    }

    pub fn height(&self) -> BigInt {
        self.x.abs().max(self.y.abs()).max(self.t.abs())
    }

    /// Equation, norm `+-p` and `p | y - 1`, each checked exactly.
    pub fn verify(&self, a: i64, p: u64) -> bool {
        let eq = is_solution(&SurfaceModel::quadratic(a), &self.to_mpoint());
        let norm = QuadInt::new(self.x.clone(), self.y.clone(), a).norm().abs() == BigInt::from(p);
        let div = (&self.y - 1u32).is_multiple_of(&BigInt::from(p));
        eq && norm && div
    }
}

fn curve_point(w: &QuadInt, p: u64, unit_power: u64, sign: i8) -> Result<CurvePoint, PellError> {
    let n = w.norm();
    let (t, rem) = (&w.v - 1u32).div_rem(&n);
    let pt = CurvePoint {
        x: w.u.clone(),
        y: w.v.clone(),
        t,
        unit_power,
        sign,
    };
    if !rem.is_zero() || !pt.verify(w.a, p) {
        return Err(PellError::Verification(format!("({}, {}, {})", pt.x, pt.y, pt.t)));
    }
    Ok(pt)
}

/// The first point of `C_p`: the least `k` with `eps^k conj(pi) = 2r` modulo
/// the prime above `p`, trying sign `+1` before `-1`.
pub fn point_on_cp(a: i64, datum: &SplitPrimeDatum) -> Result<CurvePoint, PellError> {
    datum.validate()?;
    let p = datum.p;
    let eps = fundamental_unit(a)?;
    let g = eps.reduce(datum.r, p);
    let ord = multiplicative_order(g, p).ok_or(PellError::NotSurjective(p))?;
    let c = datum.pi.conj().reduce(datum.r, p);
    let target = 2 * datum.r % p;
    let mulm = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
    for sign in [1i8, -1] {
        let mut acc = if sign == 1 { c } else { (p - c) % p };
        for k in 0..ord {
            if acc == target {
                let mut w = eps.pow(k).mul(&datum.pi.conj());
                if sign == -1 {
                    w = w.neg();
                }
                return curve_point(&w, p, k, sign);
            }
            acc = mulm(acc, g);
        }
    }
    Err(PellError::NotSurjective(p))
}

/// The first `count` points of the family on `C_p`, each obtained from the
/// previous one by multiplying with `eps^ord`, `ord` the order of `eps` mod
/// the prime.
pub fn curve_points(a: i64, datum: &SplitPrimeDatum, count: usize) -> Result<Vec<CurvePoint>, PellError> {
    let first = point_on_cp(a, datum)?;
    let eps = fundamental_unit(a)?;
    let ord = multiplicative_order(eps.reduce(datum.r, datum.p), datum.p).ok_or(PellError::NotSurjective(datum.p))?;
    let step = eps.pow(ord);
    let mut w = QuadInt::new(first.x.clone(), first.y.clone(), a);
    let mut out = vec![first.clone()];
    while out.len() < count {
        w = w.mul(&step);
        let k = first.unit_power + ord * out.len() as u64;
        out.push(curve_point(&w, datum.p, k, first.sign)?);
    }
    Ok(out)
}

/// `log10 |n|`, valid far beyond the range of `f64`.
pub fn log10_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).log10();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().expect("64-bit value");
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub p: u64,
    pub r: u64,
    pub pi: QuadInt,
    pub unit_order: u64,
    pub points: Vec<CurvePoint>,
    pub log10_heights: Vec<f64>,
    /// `log10` of the height ratio between consecutive points.
    pub growth_ratios: Vec<f64>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub a: i64,
    pub fundamental_unit: QuadInt,
    pub curves: Vec<CurveReport>,
    pub total_points: usize,
    pub all_verified: bool,
    pub note: String,
}

/// Points on `num_primes` different curves `C_p`, `points_per_curve` each.
pub fn density_experiment(a: i64, num_primes: usize, points_per_curve: usize) -> Result<DensityReport, PellError> {
    let eps = fundamental_unit(a)?;
    const MAX_BOUND: u64 = 1 << 20;
    let mut bound = 128;
    let data = loop {
        let found = surjective_primes(a, bound)?;
        if found.len() >= num_primes {
            break found;
        }
        if bound >= MAX_BOUND {
            return Err(PellError::InsufficientPrimes {
                wanted: num_primes,
                found: found.len(),
                bound,
            });
        }
        bound *= 4;
    };
    let mut curves = Vec::new();
    for datum in data.into_iter().take(num_primes) {
        let points = curve_points(a, &datum, points_per_curve)?;
        let log10_heights: Vec<f64> = points.iter().map(|p| log10_abs(&p.height())).collect();
        let growth_ratios = log10_heights.windows(2).map(|w| w[1] - w[0]).collect();
        let verified = points.iter().all(|pt| pt.verify(a, datum.p));
        let unit_order = multiplicative_order(eps.reduce(datum.r, datum.p), datum.p).unwrap_or(0);
        curves.push(CurveReport {
            p: datum.p,
            r: datum.r,
            pi: datum.pi,
            unit_order,
            points,
            log10_heights,
            growth_ratios,
            verified,
        });
    }
    Ok(DensityReport {
        a,
        fundamental_unit: eps,
        total_points: curves.iter().map(|c| c.points.len()).sum(),
        all_verified: curves.iter().all(|c| c.verified),
        curves,
        note: "finitely many primes certified; class number and infinitude hypotheses are not tested".into(),
    })
}

/// Coefficient of determination of the least-squares line through the data.
pub fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy * sxy / (sxx * syy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub a: i64,
    pub p: u64,
    /// `(index, log10 height)` for every generated point up to the top bound.
    pub log_heights: Vec<(usize, f64)>,
    /// `(log10 B, number of points of height <= B)`.
    pub counts: Vec<(u32, usize)>,
    pub r2_index_vs_log_height: f64,
    pub r2_count_vs_log_bound: f64,
    /// Points gained per decade of `B`.
    pub slope: f64,
}

/// Count the generated points of `C_p` below `B = 10^lo ..= 10^hi`.
pub fn growth_probe(a: i64, datum: &SplitPrimeDatum, lo: u32, hi: u32) -> Result<GrowthReport, PellError> {
    let top = BigInt::from(10u32).pow(hi);
    let mut n = 2;
    let points = loop {
        let pts = curve_points(a, datum, n)?;
        if pts.last().map(|p| p.height() > top).unwrap_or(true) {
            break pts;
        }
        n *= 2;
    };
    let heights: Vec<BigInt> = points.iter().map(|p| p.height()).filter(|h| *h <= top).collect();
    let log_heights: Vec<(usize, f64)> = heights.iter().enumerate().map(|(i, h)| (i, log10_abs(h))).collect();
    let counts: Vec<(u32, usize)> = (lo..=hi)
        .map(|e| {
            let b = BigInt::from(10u32).pow(e);
            (e, heights.iter().filter(|h| **h <= b).count())
        })
        .collect();
    let xs: Vec<f64> = log_heights.iter().map(|(i, _)| *i as f64).collect();
    let ys: Vec<f64> = log_heights.iter().map(|(_, h)| *h).collect();
    let bx: Vec<f64> = counts.iter().map(|(e, _)| *e as f64).collect();
    let by: Vec<f64> = counts.iter().map(|(_, c)| *c as f64).collect();
    let slope = {
        let n = bx.len() as f64;
        let (mx, my) = (bx.iter().sum::<f64>() / n, by.iter().sum::<f64>() / n);
        let sxy: f64 = bx.iter().zip(&by).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = bx.iter().map(|x| (x - mx).powi(2)).sum();
        sxy / sxx
    };
    Ok(GrowthReport {
        a,
        p: datum.p,
        r2_index_vs_log_height: r_squared(&xs, &ys),
        r2_count_vs_log_bound: r_squared(&bx, &by),
        log_heights,
        counts,
        slope,
    })
}
