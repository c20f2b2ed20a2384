//! Hilbert symbols over `Q`, the quaternion class `A` on
//! `((ax + b)y + m)t = cx + d`, and the certificate that the surface
//! `((11x + 5)y + 3)t = 3x + 1` has points everywhere locally, no integral
//! points, and no Brauer-Manin obstruction from `A`.

use crate::arith::{is_prime, legendre, mod_inv, primes_up_to, reduce_mod, split_valuation};
use crate::exact::{self, format_rational};
use crate::points::{is_solution, search_box, MPoint, SurfaceModel};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BrauerError {
    #[error("Hilbert symbol arguments must be nonzero")]
    ZeroArgument,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad place {0:?}; expected a prime or \"inf\"")]
    BadPlace(String),
    #[error("parameters need a c m (ad - bc) != 0")]
    Degenerate,
    #[error("the {0} entry of A vanishes at this point")]
    EntryVanishes(&'static str),
    #[error("point {point} is not a valid local point at {place}: {reason}")]
    BadPoint {
        point: String,
        place: HilbertPlace,
        reason: String,
    },
    #[error("residue hypotheses fail at {p}: {reason}")]
    ResidueHypothesis { p: u64, reason: String },
    #[error("local solubility needs gcd(a, c) = 1")]
    NotCoprime,
    #[error("certification failed: {0}")]
    CertificationFailed(String),
}

/// A place of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum HilbertPlace {
    Finite(u64),
    Infinity,
}

impl fmt::Display for HilbertPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HilbertPlace::Finite(p) => write!(f, "{p}"),
            HilbertPlace::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for HilbertPlace {
    type Err = BrauerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "oo" | "∞" | "real" => Ok(HilbertPlace::Infinity),
            other => {
                let p: u64 = other.parse().map_err(|_| BrauerError::BadPlace(s.to_string()))?;
                if !is_prime(p) {
                    return Err(BrauerError::NotPrime(p));
                }
                Ok(HilbertPlace::Finite(p))
            }
        }
    }
}

impl TryFrom<String> for HilbertPlace {
    type Error = BrauerError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<HilbertPlace> for String {
    fn from(p: HilbertPlace) -> String {
        p.to_string()
    }
}

/// The integer `numer * denom`, which lies in the same square class as the
/// rational.
fn square_class_integer(q: &BigRational) -> BigInt {
    q.numer() * q.denom()
}

fn hilbert_integers(a: &BigInt, b: &BigInt, place: HilbertPlace) -> Result<i8, BrauerError> {
    if a.is_zero() || b.is_zero() {
        return Err(BrauerError::ZeroArgument);
    }
    let p = match place {
        HilbertPlace::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 });
        }
        HilbertPlace::Finite(p) => p,
    };
    if !is_prime(p) {
        return Err(BrauerError::NotPrime(p));
    }
    let (va, u) = split_valuation(a, p);
    let (vb, w) = split_valuation(b, p);
    if p == 2 {
        let u8 = reduce_mod(&u, 8);
        let w8 = reduce_mod(&w, 8);
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u8) * eps(w8) + va as u64 * omega(w8) + vb as u64 * omega(u8);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut s: i8 = if (va as u64 * vb as u64 * ((p - 1) / 2)) % 2 == 0 { 1 } else { -1 };
    if vb % 2 == 1 {
        s *= legendre(&u, p);
    }
    if va % 2 == 1 {
        s *= legendre(&w, p);
    }
    Ok(s)
}

/// `(alpha, beta)_v`: `+1` iff `z^2 = alpha x^2 + beta y^2` has a nonzero
/// solution over `Q_v`.
pub fn hilbert_symbol(alpha: &BigRational, beta: &BigRational, place: HilbertPlace) -> Result<i8, BrauerError> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(BrauerError::ZeroArgument);
    }
    hilbert_integers(&square_class_integer(alpha), &square_class_integer(beta), place)
}

/// Every place where `(alpha, beta)_v` can be `-1`: infinity, 2, and the odd
/// primes dividing a numerator or denominator.
pub fn relevant_places(alpha: &BigRational, beta: &BigRational) -> Vec<HilbertPlace> {
    let mut primes = vec![2u64];
    for n in [alpha.numer(), alpha.denom(), beta.numer(), beta.denom()] {
        primes.extend(crate::arith::prime_divisors(n));
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![HilbertPlace::Infinity];
    out.extend(primes.into_iter().map(HilbertPlace::Finite));
    out
}

/// The symbols at every relevant place and their product.
pub fn hilbert_product(alpha: &BigRational, beta: &BigRational) -> Result<(i8, Vec<(HilbertPlace, i8)>), BrauerError> {
    let mut symbols = Vec::new();
    let mut prod = 1;
    for v in relevant_places(alpha, beta) {
        let s = hilbert_symbol(alpha, beta, v)?;
        prod *= s;
        symbols.push((v, s));
    }
    Ok((prod, symbols))
}

/// Parameters of `((ax + b)y + m)t = cx + d` and the class
/// `A = (-c(ax + b)/D, ((ax + b)y + m)/m)` with `D = ad - bc`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionClass {
    #[serde(with = "exact::bigint")]
    pub a: BigInt,
    #[serde(with = "exact::bigint")]
    pub b: BigInt,
    #[serde(with = "exact::bigint")]
    pub c: BigInt,
    #[serde(with = "exact::bigint")]
    pub d: BigInt,
    #[serde(with = "exact::bigint")]
    pub m: BigInt,
}

impl QuaternionClass {
    pub fn new(a: i64, b: i64, c: i64, d: i64, m: i64) -> Result<Self, BrauerError> {
        let q = QuaternionClass {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
            m: m.into(),
        };
        if (&q.a * &q.c * &q.m * q.delta()).is_zero() {
            return Err(BrauerError::Degenerate);
        }
        Ok(q)
    }

    pub fn counterexample() -> Self {
        QuaternionClass::new(11, 5, 3, 1, 3).expect("nondegenerate")
    }

    pub fn delta(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn model(&self) -> SurfaceModel {
        SurfaceModel::GeneralD7 {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
            m: self.m.clone(),
        }
    }

    /// The two entries of `A` at `(x, y)`.
    pub fn entries(&self, x: &BigRational, y: &BigRational) -> (BigRational, BigRational) {
        let r = |n: &BigInt| BigRational::from_integer(n.clone());
        let lin = r(&self.a) * x + r(&self.b);
        let first = -(r(&self.c) * &lin) / r(&self.delta());
        let second = (lin * y + r(&self.m)) / r(&self.m);
        (first, second)
    }
}

/// A point of the surface over `Z_p` (or `R`), given by rationals whose
/// denominators are prime to `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPoint {
    pub place: HilbertPlace,
    #[serde(with = "exact::rational")]
    pub x: BigRational,
    #[serde(with = "exact::rational")]
    pub y: BigRational,
    #[serde(with = "exact::rational")]
    pub t: BigRational,
}

impl LocalPoint {
    fn mpoint(&self) -> MPoint {
        MPoint {
            x: self.x.clone(),
            y: self.y.clone(),
            t: self.t.clone(),
            m: 1,
        }
    }

    /// Exact equation check plus `p`-integrality of every coordinate.
    pub fn certify(&self, q: &QuaternionClass) -> Result<(), BrauerError> {
        let bad = |reason: &str| BrauerError::BadPoint {
            point: self.to_string(),
            place: self.place,
            reason: reason.to_string(),
        };
        if !is_solution(&q.model(), &self.mpoint()) {
            return Err(bad("equation fails"));
        }
        if let HilbertPlace::Finite(p) = self.place {
            let pb = BigInt::from(p);
            if [&self.x, &self.y, &self.t].iter().any(|c| c.denom().is_multiple_of(&pb)) {
                return Err(bad("coordinate is not p-integral"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for LocalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}) at {}",
            format_rational(&self.x),
            format_rational(&self.y),
            format_rational(&self.t),
            self.place
        )
    }
}

/// `ev_A(P)`, the Hilbert symbol of the two entries of `A` at `P`.
pub fn evaluate_a(q: &QuaternionClass, pt: &LocalPoint) -> Result<i8, BrauerError> {
    let (first, second) = q.entries(&pt.x, &pt.y);
    if first.is_zero() {
        return Err(BrauerError::EntryVanishes("first"));
    }
    if second.is_zero() {
        return Err(BrauerError::EntryVanishes("second"));
    }
    hilbert_symbol(&first, &second, pt.place)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClassValue {
    pub y_mod_p: u64,
    pub is_square: bool,
    pub symbol: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluatedPoint {
    pub point: LocalPoint,
    pub symbol: i8,
    pub predicted: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub p: u64,
    /// `c / (D m)` as an exact rational.
    pub coefficient: String,
    pub coefficient_mod_p: u64,
    pub statement: String,
    pub classes: Vec<ResidueClassValue>,
    pub witnesses: Vec<EvaluatedPoint>,
    pub surjective: bool,
}

/// The residue of `A` at a prime dividing `c` and `m` exactly once, together
/// with explicit `Z_p`-points realizing each value of `ev_A`.
pub fn residue_mod_q_report(q: &QuaternionClass, p: u64) -> Result<ResidueReport, BrauerError> {
    let fail = |reason: &str| BrauerError::ResidueHypothesis {
        p,
        reason: reason.to_string(),
    };
    if !is_prime(p) || p == 2 {
        return Err(fail("need an odd prime"));
    }
    let (vc, c1) = split_valuation(&q.c, p);
    let (vm, m1) = split_valuation(&q.m, p);
    if vc != 1 || vm != 1 {
        return Err(fail("p must divide c and m exactly once"));
    }
    let pb = BigInt::from(p);
    let delta = q.delta();
    for (name, v) in [("a", &q.a), ("b", &q.b), ("d", &q.d), ("ad - bc", &delta)] {
        if v.is_multiple_of(&pb) {
            return Err(fail(&format!("{name} is not a unit")));
        }
    }
    let den = reduce_mod(&(&delta * &m1), p);
    let inv = mod_inv(den as i64, p).expect("unit");
    let coef = (reduce_mod(&c1, p) as u128 * inv as u128 % p as u128) as u64;
    let coefficient = BigRational::new(q.c.clone(), &delta * &q.m);
    let predict = |y: &BigInt| -> i8 {
        let v = (coef as u128 * reduce_mod(y, p) as u128 % p as u128) as u64;
        legendre(&BigInt::from(v), p)
    };
    let classes = (1..p)
        .map(|y| {
            let s = predict(&BigInt::from(y));
            ResidueClassValue {
                y_mod_p: y,
                is_square: s == 1,
                symbol: s,
            }
        })
        .collect();

    let mut witnesses = Vec::new();
    for class in 1..p {
        'search: for x in 0..=20i64 {
            for y in (1..=40i64).filter(|y| *y as u64 % p == class) {
                let (xb, yb) = (BigRational::from_integer(x.into()), BigRational::from_integer(y.into()));
                let r = |n: &BigInt| BigRational::from_integer(n.clone());
                let lhs = (r(&q.a) * &xb + r(&q.b)) * &yb + r(&q.m);
                if lhs.is_zero() {
                    continue;
                }
                let t = (r(&q.c) * &xb + r(&q.d)) / lhs;
                let pt = LocalPoint {
                    place: HilbertPlace::Finite(p),
                    x: xb,
                    y: yb,
                    t,
                };
                if pt.certify(q).is_err() {
                    continue;
                }
                if let Ok(symbol) = evaluate_a(q, &pt) {
                    let predicted = predict(&BigInt::from(y));
                    witnesses.push(EvaluatedPoint {
                        point: pt,
                        symbol,
                        predicted,
                    });
                    break 'search;
                }
            }
        }
    }
    let surjective = witnesses.iter().any(|w| w.symbol == 1) && witnesses.iter().any(|w| w.symbol == -1);
    Ok(ResidueReport {
        p,
        coefficient: format_rational(&coefficient),
        coefficient_mod_p: coef,
        statement: format!(
            "ev_A at {p} is +1 exactly when {coef}*y is a square mod {p}"
        ),
        classes,
        witnesses,
        surjective,
    })
}

/// Least non-negative solution of `c x + d = 0 mod p^k`, for `p` not
/// dividing `c`.
fn solve_linear_mod(c: &BigInt, d: &BigInt, modulus: &BigInt) -> BigInt {
    let e = c.mod_floor(modulus).extended_gcd(modulus);
    debug_assert!(e.gcd.is_one());
    (-d * e.x).mod_floor(modulus)
}

/// An explicit `Z_p`-point: on the slice `y = 0` when `p` does not divide
/// `c`, otherwise on a slice `x = const` with `ax + b` a unit and `t = 1`.
pub fn local_point(q: &QuaternionClass, p: u64) -> Result<LocalPoint, BrauerError> {
    if !is_prime(p) {
        return Err(BrauerError::NotPrime(p));
    }
    let pb = BigInt::from(p);
    let r = |n: &BigInt| BigRational::from_integer(n.clone());
    let pt = if !q.c.is_multiple_of(&pb) {
        let (vm, _) = split_valuation(&q.m, p);
        let modulus = pb.pow(vm.max(1));
        let x = solve_linear_mod(&q.c, &q.d, &modulus);
        let t = (r(&q.c) * r(&x) + r(&q.d)) / r(&q.m);
        LocalPoint {
            place: HilbertPlace::Finite(p),
            x: r(&x),
            y: BigRational::zero(),
            t,
        }
    } else {
        if q.a.is_multiple_of(&pb) {
            return Err(BrauerError::NotCoprime);
        }
        let x = if q.b.is_multiple_of(&pb) { BigInt::one() } else { BigInt::zero() };
        let lin = &q.a * &x + &q.b;
        let y = (r(&q.c) * r(&x) + r(&q.d) - r(&q.m)) / r(&lin);
        LocalPoint {
            place: HilbertPlace::Finite(p),
            x: r(&x),
            y,
            t: BigRational::one(),
        }
    };
    pt.certify(q)?;
    Ok(pt)
}

/// `(0, 0, d/m)`.
pub fn real_point(q: &QuaternionClass) -> Result<LocalPoint, BrauerError> {
    let pt = LocalPoint {
        place: HilbertPlace::Infinity,
        x: BigRational::zero(),
        y: BigRational::zero(),
        t: BigRational::new(q.d.clone(), q.m.clone()),
    };
    pt.certify(q)?;
    Ok(pt)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalScan {
    pub prime_bound: u64,
    pub points: Vec<LocalPoint>,
    pub real_point: LocalPoint,
    pub all_certified: bool,
}

pub fn local_solubility_scan(q: &QuaternionClass, prime_bound: u64) -> Result<LocalScan, BrauerError> {
    if !q.a.gcd(&q.c).is_one() {
        return Err(BrauerError::NotCoprime);
    }
    let points = primes_up_to(prime_bound)
        .into_iter()
        .map(|p| local_point(q, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LocalScan {
        prime_bound,
        all_certified: points.iter().all(|p| p.certify(q).is_ok()),
        points,
        real_point: real_point(q)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCertificate {
    /// `|a x + b| > |c x + d| + |m|` checked for every `|x| <=` this.
    pub window: i64,
    pub window_ok: bool,
    /// Linear bounds covering `x >= right_start` and `x <= left_end`.
    pub right_start: i64,
    pub left_end: i64,
    pub tails: Vec<String>,
    pub tails_ok: bool,
    /// `cx + d = 0` has no integer root, so `t != 0`.
    pub t_zero_excluded: bool,
    /// `m t = cx + d` has no integer solution, so `y != 0`.
    pub y_zero_excluded: bool,
    /// With `y, t != 0` the inequality contradicts the equation.
    pub proves_no_integral_points: bool,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Certify `|ax + b| > |cx + d| + |m|` for every integer `x`, and with it
/// that the surface has no integral points.
pub fn inequality_certificate(q: &QuaternionClass, window: i64) -> InequalityCertificate {
    let (a, b, c, d, m) = (&q.a, &q.b, &q.c, &q.d, &q.m);
    let holds_at = |x: &BigInt| (a * x + b).abs() > (c * x + d).abs() + m.abs();
    let window_ok = (-window..=window).all(|x| holds_at(&BigInt::from(x)));

    // Beyond the real roots of both linear forms their signs are constant.
    let right = floor_div(&-b, a).max(floor_div(&-d, c)) + BigInt::one();
    let left = -floor_div(b, a).max(floor_div(d, c)) - BigInt::one();
    // Clamping keeps [left + 1, right - 1] inside the window.
    let right = right.clamp(-BigInt::from(window), BigInt::from(window));
    let left = left.clamp(-BigInt::from(window), BigInt::from(window));
    let tail = |x0: &BigInt, outward: i32| -> (bool, String) {
        let s1 = (a * x0 + b).signum();
        let s2 = (c * x0 + d).signum();
        // On the tail, |ax+b| - |cx+d| = slope x + icpt.
        let slope = &s1 * a - &s2 * c;
        let icpt = &s1 * b - &s2 * d;
        let at = &slope * x0 + &icpt;
        let monotone = (&slope * BigInt::from(outward)).sign() != num_bigint::Sign::Minus;
        let signs_fixed = !s1.is_zero() && !s2.is_zero();
        let ok = signs_fixed && monotone && at > m.abs();
        let rel = if outward > 0 { ">=" } else { "<=" };
        let line = format!(
            "|ax+b| - |cx+d| = {} >= {} > {} for x {} {}",
            crate::points::fmt_poly(&[
                (BigRational::from_integer(slope.clone()), "x"),
                (BigRational::from_integer(icpt.clone()), ""),
            ]),
            at,
            m.abs(),
            rel,
            x0
        );
        (ok, line)
    };
    let (r_ok, r_line) = tail(&right, 1);
    let (l_ok, l_line) = tail(&left, -1);
    let tails_ok = r_ok && l_ok;

    let t_zero_excluded = !d.is_multiple_of(c);
    let y_zero_excluded = !d.is_multiple_of(&c.gcd(m));
    InequalityCertificate {
        window,
        window_ok,
        right_start: right.to_i64().expect("within window"),
        left_end: left.to_i64().expect("within window"),
        tails: vec![r_line, l_line],
        tails_ok,
        t_zero_excluded,
        y_zero_excluded,
        proves_no_integral_points: window_ok && tails_ok && t_zero_excluded && y_zero_excluded,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSearch {
    pub bound: u64,
    pub count: usize,
    pub solutions: Vec<MPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub params: QuaternionClass,
    pub equation: String,
    pub emptiness: InequalityCertificate,
    pub box_search: BoxSearch,
    pub local: LocalScan,
    pub evaluation: ResidueReport,
    pub checks: Vec<(String, bool)>,
    pub all_pass: bool,
    pub verdict: String,
}

pub const COUNTEREXAMPLE_VERDICT: &str = "BM obstruction trivial; X(ℤ) = ∅";

/// Run every check for the surface given by `q`, evaluating `A` at `p_eval`.
pub fn brauer_manin_checks(
    q: &QuaternionClass,
    box_bound: u64,
    prime_bound: u64,
    p_eval: u64,
) -> Result<CounterexampleReport, BrauerError> {
    let emptiness = inequality_certificate(q, 1_000_000);
    let solutions = search_box(&q.model(), 1, box_bound).map_err(|e| BrauerError::CertificationFailed(e.to_string()))?;
    let box_search = BoxSearch {
        bound: box_bound,
        count: solutions.len(),
        solutions,
    };
    let local = local_solubility_scan(q, prime_bound)?;
    let evaluation = residue_mod_q_report(q, p_eval)?;
    let checks = vec![
        ("no integral points (inequality and exclusions)".to_string(), emptiness.proves_no_integral_points),
        (format!("box search empty at {box_bound}"), box_search.count == 0),
        (format!("local points for p <= {prime_bound} and inf"), local.all_certified),
        (
            format!("ev_A surjective at {p_eval}"),
            evaluation.surjective && evaluation.witnesses.iter().all(|w| w.symbol == w.predicted),
        ),
    ];
    let all_pass = checks.iter().all(|(_, ok)| *ok);
    let verdict = if all_pass {
        COUNTEREXAMPLE_VERDICT.to_string()
    } else {
        let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
        format!("certification failed: {}", failed.join(", "))
    };
    Ok(CounterexampleReport {
        params: q.clone(),
        equation: q.model().to_string(),
        emptiness,
        box_search,
        local,
        evaluation,
        checks,
        all_pass,
        verdict,
    })
}

/// The full verdict for `((11x + 5)y + 3)t = 3x + 1`. Any failing check is an
/// error.
pub fn counterexample_report(box_bound: u64, prime_bound: u64) -> Result<CounterexampleReport, BrauerError> {
    let report = brauer_manin_checks(&QuaternionClass::counterexample(), box_bound, prime_bound, 3)?;
    if !report.all_pass {
        return Err(BrauerError::CertificationFailed(report.verdict));
    }
    Ok(report)
}
