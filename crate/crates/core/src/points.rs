//! Exact search for M-integral points on the explicit surface families and
//! the curve decomposition that confines the integral points of the split
//! model.
//!
//! Every family has the shape `F(x, y) t = G(x, y)`. A point is M-integral
//! when `Mx`, `My` and `Mt` are integers; searches run over the scaled
//! integers `X = Mx`, `Y = My`, `T = Mt` and solve for `T` exactly.

use crate::exact::{self, format_rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, PrimInt, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointsError {
    #[error("M must be at least 1")]
    BadDenominator,
    #[error("search bound must be at least 1")]
    BadBound,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("solution {0} lies on none of the curves")]
    OffFamily(String),
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The three equation families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", content = "coeffs", rename_all = "snake_case")]
pub enum SurfaceModel {
    /// `(axy + bx + cy + d) t = ex + f`
    Bilinear {
        #[serde(with = "exact::rational")]
        a: BigRational,
        #[serde(with = "exact::rational")]
        b: BigRational,
        #[serde(with = "exact::rational")]
        c: BigRational,
        #[serde(with = "exact::rational")]
        d: BigRational,
        #[serde(with = "exact::rational")]
        e: BigRational,
        #[serde(with = "exact::rational")]
        f: BigRational,
    },
    /// `(x^2 - a y^2) t = bx + cy + d`
    Normform {
        #[serde(with = "exact::bigint")]
        a: BigInt,
        #[serde(with = "exact::bigint")]
        b: BigInt,
        #[serde(with = "exact::bigint")]
        c: BigInt,
        #[serde(with = "exact::bigint")]
        d: BigInt,
    },
    /// `((ax + b) y + m) t = cx + d`
    #[serde(rename = "generalD7")]
    GeneralD7 {
        #[serde(with = "exact::bigint")]
        a: BigInt,
        #[serde(with = "exact::bigint")]
        b: BigInt,
        #[serde(with = "exact::bigint")]
        c: BigInt,
        #[serde(with = "exact::bigint")]
        d: BigInt,
        #[serde(with = "exact::bigint")]
        m: BigInt,
    },
}

impl SurfaceModel {
    /// `(xy - 1) t = x - 1`
    pub fn trivial() -> Self {
        SurfaceModel::Bilinear {
            a: q(1),
            b: q(0),
            c: q(0),
            d: q(-1),
            e: q(1),
            f: q(-1),
        }
    }

    /// `(x^2 - a y^2) t = y - 1`
    pub fn quadratic(a: i64) -> Self {
        SurfaceModel::Normform {
            a: a.into(),
            b: 0.into(),
            c: 1.into(),
            d: (-1).into(),
        }
    }

    /// `((11x + 5) y + 3) t = 3x + 1`
    pub fn counterexample() -> Self {
        Self::general_d7(11, 5, 3, 1, 3)
    }

    pub fn general_d7(a: i64, b: i64, c: i64, d: i64, m: i64) -> Self {
        SurfaceModel::GeneralD7 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
            m: m.into(),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            SurfaceModel::Bilinear { .. } => "bilinear",
            SurfaceModel::Normform { .. } => "normform",
            SurfaceModel::GeneralD7 { .. } => "generalD7",
        }
    }

    /// Build a model from a family name and a JSON object of coefficients.
    pub fn from_parts(family: &str, coeffs: &serde_json::Value) -> Result<Self, PointsError> {
        let doc = serde_json::json!({ "family": family, "coeffs": coeffs });
        let model: SurfaceModel =
            serde_json::from_value(doc).map_err(|e| PointsError::InvalidModel(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), PointsError> {
        match self {
            SurfaceModel::Bilinear { a, b, c, d, .. } => {
                if [a, b, c, d].iter().all(|x| x.is_zero()) {
                    return Err(PointsError::InvalidModel("the factor of t vanishes".into()));
                }
            }
            SurfaceModel::Normform { a, .. } => {
                if crate::arith::is_perfect_square(a) {
                    return Err(PointsError::InvalidModel(format!("a = {a} is a square")));
                }
            }
            SurfaceModel::GeneralD7 { a, b, c, d, m } => {
                let delta = a * d - b * c;
                if (a * c * m * delta).is_zero() {
                    return Err(PointsError::InvalidModel("need a c m (ad - bc) != 0".into()));
                }
            }
        }
        Ok(())
    }

    /// `(F(x, y), G(x, y))` where the equation reads `F t = G`.
    pub fn eval(&self, x: &BigRational, y: &BigRational) -> (BigRational, BigRational) {
        match self {
            SurfaceModel::Bilinear { a, b, c, d, e, f } => (
                a * x * y + b * x + c * y + d,
                e * x + f,
            ),
            SurfaceModel::Normform { a, b, c, d } => {
                let r = |n: &BigInt| BigRational::from_integer(n.clone());
                (
                    x * x - r(a) * y * y,
                    r(b) * x + r(c) * y + r(d),
                )
            }
            SurfaceModel::GeneralD7 { a, b, c, d, m } => {
                let r = |n: &BigInt| BigRational::from_integer(n.clone());
                (
                    (r(a) * x + r(b)) * y + r(m),
                    r(c) * x + r(d),
                )
            }
        }
    }

    /// Coefficients of `S F(X/M, Y/M)` and `S G(X/M, Y/M)` as polynomials in
    /// `Y` for a fixed `X`, with `S` chosen to clear every denominator.
    /// Returned as `([f2, f1, f0], [g1, g0])`.
    fn scaled_row(&self, x: &BigInt, m: &BigInt) -> ([BigInt; 3], [BigInt; 2]) {
        let m2 = m * m;
        match self {
            SurfaceModel::Bilinear { a, b, c, d, e, f } => {
                let den = [a, b, c, d, e, f]
                    .iter()
                    .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                let int = |r: &BigRational| (r * BigRational::from_integer(den.clone())).to_integer();
                let (a, b, c, d, e, f) = (int(a), int(b), int(c), int(d), int(e), int(f));
                (
                    [BigInt::zero(), &a * x + &c * m, &b * m * x + &d * &m2],
                    [BigInt::zero(), &e * m * x + &f * &m2],
                )
            }
            SurfaceModel::Normform { a, b, c, d } => (
                [-a.clone(), BigInt::zero(), x * x],
                [c * m, b * m * x + d * &m2],
            ),
            SurfaceModel::GeneralD7 { a, b, c, d, m: mm } => (
                [BigInt::zero(), a * x + b * m, mm * &m2],
                [BigInt::zero(), c * m * x + d * &m2],
            ),
        }
    }
}

pub(crate) fn fmt_poly(terms: &[(BigRational, &str)]) -> String {
    let mut out = String::new();
    for (coef, mono) in terms {
        if coef.is_zero() {
            continue;
        }
        let neg = coef.is_negative();
        let abs = coef.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() || mono.is_empty() {
            out.push_str(&format_rational(&abs));
        }
        out.push_str(mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |n: &BigInt| BigRational::from_integer(n.clone());
        let (lhs, rhs) = match self {
            SurfaceModel::Bilinear { a, b, c, d, e, f } => (
                fmt_poly(&[(a.clone(), "xy"), (b.clone(), "x"), (c.clone(), "y"), (d.clone(), "")]),
                fmt_poly(&[(e.clone(), "x"), (f.clone(), "")]),
            ),
            SurfaceModel::Normform { a, b, c, d } => (
                fmt_poly(&[(q(1), "x^2"), (-r(a), "y^2")]),
                fmt_poly(&[(r(b), "x"), (r(c), "y"), (r(d), "")]),
            ),
            SurfaceModel::GeneralD7 { a, b, c, d, m } => (
                fmt_poly(&[(r(a), "xy"), (r(b), "y"), (r(m), "")]),
                fmt_poly(&[(r(c), "x"), (r(d), "")]),
            ),
        };
        write!(f, "({lhs})t = {rhs}")
    }
}

/// A rational point whose coordinates all have denominator dividing `M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MPoint {
    #[serde(with = "exact::rational")]
    pub x: BigRational,
    #[serde(with = "exact::rational")]
    pub y: BigRational,
    #[serde(with = "exact::rational")]
    pub t: BigRational,
    #[serde(rename = "M")]
    pub m: u64,
}

impl MPoint {
    pub fn integral(x: i64, y: i64, t: i64) -> Self {
        MPoint {
            x: q(x),
            y: q(y),
            t: q(t),
            m: 1,
        }
    }

    pub fn from_big(x: BigInt, y: BigInt, t: BigInt) -> Self {
        MPoint {
            x: BigRational::from_integer(x),
            y: BigRational::from_integer(y),
            t: BigRational::from_integer(t),
            m: 1,
        }
    }

    /// The point `(X/M, Y/M, T/M)`.
    pub fn from_scaled(x: BigInt, y: BigInt, t: BigInt, m: u64) -> Self {
        let mm = BigInt::from(m);
        MPoint {
            x: BigRational::new(x, mm.clone()),
            y: BigRational::new(y, mm.clone()),
            t: BigRational::new(t, mm),
            m,
        }
    }

    pub fn is_m_integral(&self) -> bool {
        let mm = BigRational::from_integer(BigInt::from(self.m));
        self.m >= 1 && [&self.x, &self.y, &self.t].iter().all(|c| (*c * &mm).is_integer())
    }

    /// `(Mx, My, Mt)`, if the point is M-integral.
    pub fn scaled(&self) -> Option<[BigInt; 3]> {
        if !self.is_m_integral() {
            return None;
        }
        let mm = BigRational::from_integer(BigInt::from(self.m));
        Some([&self.x, &self.y, &self.t].map(|c| (c * &mm).to_integer()))
    }
}

impl fmt::Display for MPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rational(&self.x),
            format_rational(&self.y),
            format_rational(&self.t)
        )
    }
}

/// Exact substitution test of `F(x, y) t = G(x, y)`.
pub fn is_solution(model: &SurfaceModel, p: &MPoint) -> bool {
    let (f, g) = model.eval(&p.x, &p.y);
    f * &p.t == g
}

enum Hit<T> {
    At(T),
    AnyT,
}

/// Scan one row `X = const` over `|Y| <= r`, where `F = (f2 Y + f1) Y + f0`,
/// `G = g1 Y + g0` and we need `F T = m G` with `|T| <= r`. Callers ensure
/// `r |F|` and `m |G|` fit in `T`.
fn scan_row<T: PrimInt + Signed>(f: [T; 3], g: [T; 2], m: T, r: T, out: &mut Vec<(T, Hit<T>)>) {
    let c = m * g[1];
    if f[0].is_zero() && g[0].is_zero() && !f[1].is_zero() && !c.is_zero() && c.abs() / r < T::from(4).unwrap() * r {
        divisor_row(f[1], f[2], c, r, out);
        return;
    }
    let mut y = -r;
    while y <= r {
        let fv = (f[0] * y + f[1]) * y + f[2];
        let gv = m * (g[0] * y + g[1]);
        if fv.is_zero() {
            if gv.is_zero() {
                out.push((y, Hit::AnyT));
            }
        } else {
            let (fa, ga) = (fv.abs(), gv.abs());
            // |T| < 1 or |T| > r rules the pair out without a division.
            if ga <= r * fa && (gv.is_zero() || ga >= fa) && (gv % fv).is_zero() {
                out.push((y, Hit::At(gv / fv)));
            }
        }
        y = y + T::one();
    }
}

/// Rows with `F = f1 Y + f2` and constant `m G = c != 0`: `F` must be a
/// divisor of `c`, so walk the divisors instead of every `Y`.
fn divisor_row<T: PrimInt + Signed>(f1: T, f2: T, c: T, r: T, out: &mut Vec<(T, Hit<T>)>) {
    let ca = c.abs();
    let start = out.len();
    let mut try_value = |fv: T| {
        let num = fv - f2;
        if (num % f1).is_zero() {
            let y = num / f1;
            let t = c / fv;
            if y.abs() <= r && t.abs() <= r {
                out.push((y, Hit::At(t)));
            }
        }
    };
    let mut d = T::one();
    while d * d <= ca {
        if (ca % d).is_zero() {
            let e = ca / d;
            for v in [d, -d] {
                try_value(v);
            }
            if e != d {
                for v in [e, -e] {
                    try_value(v);
                }
            }
        }
        d = d + T::one();
    }
    out[start..].sort_by(|a, b| a.0.cmp(&b.0));
}

fn row_magnitude(f: &[BigInt; 3], g: &[BigInt; 2], m: &BigInt, r: &BigInt) -> BigInt {
    let fmax = f[0].abs() * r * r + f[1].abs() * r + f[2].abs();
    let gmax = m * (g[0].abs() * r + g[1].abs());
    (fmax * r).max(gmax)
}

/// All M-integral solutions with `|Mx|, |My|, |Mt| <= MB`, sorted by
/// `(x, y, t)`.
pub fn search_box(model: &SurfaceModel, m: u64, bound: u64) -> Result<Vec<MPoint>, PointsError> {
    Ok(search_box_scaled(model, m, bound)?
        .into_iter()
        .map(|[x, y, t]| MPoint::from_scaled(x, y, t, m))
        .collect())
}

/// Like [`search_box`] but returns the scaled integer triples `(X, Y, T)`.
pub fn search_box_scaled(model: &SurfaceModel, m: u64, bound: u64) -> Result<Vec<[BigInt; 3]>, PointsError> {
    if m == 0 {
        return Err(PointsError::BadDenominator);
    }
    if bound == 0 {
        return Err(PointsError::BadBound);
    }
    model.validate()?;
    let r = (m as i128) * (bound as i128);
    let rb = BigInt::from(r);
    let mb = BigInt::from(m);
    let mut out = Vec::new();
    let mut row_i64 = Vec::new();
    let mut row_i128 = Vec::new();
    let i64_limit = BigInt::from(1i64 << 62);
    let i128_limit = BigInt::from(1i128 << 125);
    let emit = |x: &BigInt, y: BigInt, hit: Hit<BigInt>, out: &mut Vec<[BigInt; 3]>| match hit {
        Hit::At(t) => out.push([x.clone(), y, t]),
        Hit::AnyT => {
            for t in -r..=r {
                out.push([x.clone(), y.clone(), BigInt::from(t)]);
            }
        }
    };
    for xi in -r..=r {
        let x = BigInt::from(xi);
        let (f, g) = model.scaled_row(&x, &mb);
        let size = row_magnitude(&f, &g, &mb, &rb);
        if size < i64_limit {
            let c = |n: &BigInt| n.to_i64().expect("checked magnitude");
            row_i64.clear();
            scan_row([c(&f[0]), c(&f[1]), c(&f[2])], [c(&g[0]), c(&g[1])], m as i64, r as i64, &mut row_i64);
            for (y, hit) in row_i64.drain(..) {
                let hit = match hit {
                    Hit::At(t) => Hit::At(BigInt::from(t)),
                    Hit::AnyT => Hit::AnyT,
                };
                emit(&x, BigInt::from(y), hit, &mut out);
            }
        } else if size < i128_limit {
            let c = |n: &BigInt| n.to_i128().expect("checked magnitude");
            row_i128.clear();
            scan_row([c(&f[0]), c(&f[1]), c(&f[2])], [c(&g[0]), c(&g[1])], m as i128, r, &mut row_i128);
            for (y, hit) in row_i128.drain(..) {
                let hit = match hit {
                    Hit::At(t) => Hit::At(BigInt::from(t)),
                    Hit::AnyT => Hit::AnyT,
                };
                emit(&x, BigInt::from(y), hit, &mut out);
            }
        } else {
            for yi in -r..=r {
                let y = BigInt::from(yi);
                let fv = (&f[0] * &y + &f[1]) * &y + &f[2];
                let gv = &mb * (&g[0] * &y + &g[1]);
                if fv.is_zero() {
                    if gv.is_zero() {
                        emit(&x, y, Hit::AnyT, &mut out);
                    }
                } else {
                    let (t, rem) = gv.div_rem(&fv);
                    if rem.is_zero() && t.abs() <= rb {
                        emit(&x, y, Hit::At(t), &mut out);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A line `t = c`, `x = c` or `y = c` in the affine coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Curve {
    pub var: char,
    #[serde(with = "exact::rational")]
    pub value: BigRational,
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.var, format_rational(&self.value))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFamily {
    #[serde(rename = "M")]
    pub m: u64,
    pub curves: Vec<Curve>,
}

impl CurveFamily {
    /// Index of every curve through the point with scaled coordinates
    /// `(X, Y, T)`.
    pub fn curves_through(&self, scaled: &[BigInt; 3]) -> Vec<usize> {
        let mm = BigInt::from(self.m);
        let coords: Vec<BigRational> = scaled.iter().map(|c| BigRational::new(c.clone(), mm.clone())).collect();
        self.curves
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let coord = match c.var {
                    'x' => &coords[0],
                    'y' => &coords[1],
                    _ => &coords[2],
                };
                *coord == c.value
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// `{t = 0}`, the lines `y = j` with `|j| <= 2M` and the lines `x = 1 + i`
/// with `|i| <= 2(M + 1)`, over M-integral constants.
pub fn curve_decomposition(m: u64) -> Result<CurveFamily, PointsError> {
    if m == 0 {
        return Err(PointsError::BadDenominator);
    }
    let mi = m as i64;
    let frac = |k: i64| BigRational::new(BigInt::from(k), BigInt::from(mi));
    let mut curves = vec![Curve {
        var: 't',
        value: q(0),
    }];
    let ymax = 2 * mi * mi;
    curves.extend((-ymax..=ymax).map(|k| Curve {
        var: 'y',
        value: frac(k),
    }));
    let xmax = 2 * (mi + 1) * mi;
    curves.extend((-xmax..=xmax).map(|k| Curve {
        var: 'x',
        value: q(1) + frac(k),
    }));
    Ok(CurveFamily { m, curves })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondensityReport {
    #[serde(rename = "M")]
    pub m: u64,
    pub bound: u64,
    pub solutions: usize,
    pub pass: bool,
    /// Number of solutions on each curve; a point on several curves counts
    /// for each of them.
    pub curve_counts: BTreeMap<String, usize>,
}

/// Search the split model `(xy - 1)t = x - 1` and check that every hit lies
/// on the curve family for `M`.
pub fn nondensity_certificate(m: u64, bound: u64) -> Result<NondensityReport, PointsError> {
    let family = curve_decomposition(m)?;
    let hits = search_box_scaled(&SurfaceModel::trivial(), m, bound)?;
    let mb = BigInt::from(m);
    let two = BigInt::from(2);
    let y_lim = &two * &mb * &mb;
    let x_lim = &two * (&mb + 1) * &mb;
    let index: HashMap<String, usize> = family
        .curves
        .iter()
        .enumerate()
        .map(|(i, c)| (c.to_string(), i))
        .collect();
    let mut counts = vec![0usize; family.curves.len()];
    for p in &hits {
        let [x, y, t] = p;
        let mut on_any = false;
        if t.is_zero() {
            counts[0] += 1;
            on_any = true;
        }
        if y.abs() <= y_lim {
            let label = format!("y={}", format_rational(&BigRational::new(y.clone(), mb.clone())));
            counts[index[&label]] += 1;
            on_any = true;
        }
        if (x - &mb).abs() <= x_lim {
            let label = format!("x={}", format_rational(&BigRational::new(x.clone(), mb.clone())));
            counts[index[&label]] += 1;
            on_any = true;
        }
        if !on_any {
            return Err(PointsError::OffFamily(
                MPoint::from_scaled(x.clone(), y.clone(), t.clone(), m).to_string(),
            ));
        }
    }
    Ok(NondensityReport {
        m,
        bound,
        solutions: hits.len(),
        pass: true,
        curve_counts: family
            .curves
            .iter()
            .zip(counts)
            .filter(|(_, n)| *n > 0)
            .map(|(c, n)| (c.to_string(), n))
            .collect(),
    })
}
