//! Point counts and traces of Frobenius for cubic curves `y² = f(x)`.
//!
//! The naive trace comes from counting points with the quadratic
//! character. The formula traces express `a_q` through `₂F₁` values with
//! parameters `(T^{(q−1)/6}, T^{5(q−1)/6}; ε)` for `q ≡ 1 (mod 6)` and
//! `(T^{(q−1)/4}, T^{3(q−1)/4}; ε)` for `q ≡ 1 (mod 4)`:
//!
//! * `y² = x³ + cx² + d`:  `a_q = −q φ(−3c) ₂F₁(… | −27d/(4c³))`
//! * `y² = x³ + fx² + gx`: `a_q = −q φ(2f) T^{(q−1)/4}(−1) ₂F₁(… | 4g/f²)`
//! * `y² = x³ + ax + b` with `3k² + a = 0`:
//!   `a_q = −q φ(−k) ₂F₁(… | −(k³+ak+b)/(4k³))`
//! * `y² = x³ + ax + b` with `h³ + ah + b = 0`, `h ≠ 0`:
//!   `a_q = −q φ(6h) T^{(q−1)/4}(−1) ₂F₁(… | (12h²+4a)/(9h²))`
//!
//! where `φ = T^{(q−1)/2}` is the quadratic character.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::characters::{quadratic_char, CharIndex, ComplexScalar};
use crate::field::{Elem, Field};
use crate::hypergeo::HyperKernel;

/// Largest admissible distance from the nearest integer.
pub const ROUNDING_LIMIT: f64 = 0.4;
/// Imaginary-part budget, relative to `q`.
pub const IMAG_LIMIT_PER_Q: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveSpec {
    /// `y² = x³ + ax + b`
    Short { a: Elem, b: Elem },
    /// `y² = x³ + cx² + d`
    E1 { c: Elem, d: Elem },
    /// `y² = x³ + fx² + gx`
    E2 { f: Elem, g: Elem },
    /// `y² = x³ + c₂x² + c₁x + c₀`
    General { c2: Elem, c1: Elem, c0: Elem },
}

impl CurveSpec {
    /// `(c₂, c₁, c₀)` of the right-hand side.
    pub fn cubic(&self) -> [Elem; 3] {
        match *self {
            CurveSpec::Short { a, b } => [Elem::ZERO, a, b],
            CurveSpec::E1 { c, d } => [c, Elem::ZERO, d],
            CurveSpec::E2 { f, g } => [f, g, Elem::ZERO],
            CurveSpec::General { c2, c1, c0 } => [c2, c1, c0],
        }
    }

    pub fn shape_name(&self) -> &'static str {
        match self {
            CurveSpec::Short { .. } => "short",
            CurveSpec::E1 { .. } => "e1",
            CurveSpec::E2 { .. } => "e2",
            CurveSpec::General { .. } => "general",
        }
    }

    /// Named coefficients in declaration order.
    pub fn coefficients(&self) -> Vec<(&'static str, Elem)> {
        match *self {
            CurveSpec::Short { a, b } => vec![("a", a), ("b", b)],
            CurveSpec::E1 { c, d } => vec![("c", c), ("d", d)],
            CurveSpec::E2 { f, g } => vec![("f", f), ("g", g)],
            CurveSpec::General { c2, c1, c0 } => vec![("c2", c2), ("c1", c1), ("c0", c0)],
        }
    }

    #[inline]
    pub fn rhs(&self, field: &Field, x: Elem) -> Elem {
        let [c2, c1, c0] = self.cubic();
        // Horner: ((x + c₂)x + c₁)x + c₀
        let v = field.mul(field.add(x, c2), x);
        let v = field.mul(field.add(v, c1), x);
        field.add(v, c0)
    }

    /// Discriminant of the cubic `x³ + c₂x² + c₁x + c₀`.
    pub fn discriminant(&self, field: &Field) -> Elem {
        let [b, c, d] = self.cubic();
        let k = |n: i64| field.from_int(n);
        let m = |xs: &[Elem]| xs.iter().fold(Elem::ONE, |acc, &x| field.mul(acc, x));
        let terms = [
            m(&[k(18), b, c, d]),
            m(&[k(-4), b, b, b, d]),
            m(&[b, b, c, c]),
            m(&[k(-4), c, c, c]),
            m(&[k(-27), d, d]),
        ];
        terms.iter().fold(Elem::ZERO, |acc, &t| field.add(acc, t))
    }

    pub fn is_singular(&self, field: &Field) -> bool {
        self.discriminant(field).is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Method {
    #[serde(rename = "naive")]
    Naive,
    #[serde(rename = "thm_1_1")]
    Thm11,
    #[serde(rename = "thm_1_2")]
    Thm12,
    #[serde(rename = "thm_3_1")]
    Thm31,
    #[serde(rename = "thm_3_2")]
    Thm32,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Thm11 => "thm_1_1",
            Method::Thm12 => "thm_1_2",
            Method::Thm31 => "thm_3_1",
            Method::Thm32 => "thm_3_2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum TraceError {
    #[error("q = {q} is not 1 mod {modulus}")]
    WrongCongruence { q: u32, modulus: u32 },
    #[error("coefficient a must be nonzero")]
    ZeroA,
    #[error("coefficient c must be nonzero")]
    ZeroC,
    #[error("coefficient f must be nonzero")]
    ZeroF,
    #[error("-a/3 is not a square")]
    NonResidue,
    #[error("curve is singular")]
    Singular,
    #[error("q = 9 is excluded")]
    ExcludedQ,
    #[error("x^3 + ax + b has no nonzero root")]
    NoNonzeroRoot,
    #[error("formula divides by 9h^2, which vanishes in characteristic 3")]
    CharacteristicThree,
    #[error("formula value {re} + {im}i is not close enough to an integer")]
    PrecisionFailure { re: f64, im: f64 },
}

impl TraceError {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            TraceError::WrongCongruence { .. } => "wrong_congruence",
            TraceError::ZeroA => "zero_a",
            TraceError::ZeroC => "zero_c",
            TraceError::ZeroF => "zero_f",
            TraceError::NonResidue => "non_residue",
            TraceError::Singular => "singular",
            TraceError::ExcludedQ => "excluded_q",
            TraceError::NoNonzeroRoot => "no_nonzero_root",
            TraceError::CharacteristicThree => "characteristic_three",
            TraceError::PrecisionFailure { .. } => "precision_failure",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceReport {
    pub curve: CurveSpec,
    pub method: Method,
    /// Formula value before rounding; exact for the naive method.
    pub raw: ComplexScalar,
    pub trace: i64,
    pub residual_to_integer: f64,
    pub imag_residual: f64,
    /// The `k` or `h` the report was computed with.
    pub auxiliary: Option<Elem>,
    /// Every admissible `k` or `h` with the trace it produces.
    pub root_traces: Vec<(Elem, i64)>,
    pub singular: bool,
}

impl TraceReport {
    pub fn roots_agree(&self) -> bool {
        self.root_traces.iter().all(|&(_, t)| t == self.trace)
    }

    /// `|a_q| ≤ 2√q`, checked as `a_q² ≤ 4q`.
    pub fn within_hasse(&self, q: u32) -> bool {
        (self.trace as i128).pow(2) <= 4 * q as i128
    }
}

/// `#E(F_q)` including the point at infinity.
pub fn count_points(field: &Field, curve: &CurveSpec) -> u64 {
    1 + field
        .elements()
        .map(|x| {
            let v = curve.rhs(field, x);
            if v.is_zero() {
                1
            } else if field.is_square(v) {
                2
            } else {
                0
            }
        })
        .sum::<u64>()
}

pub fn trace_naive(field: &Field, curve: &CurveSpec) -> TraceReport {
    let trace = field.q() as i64 + 1 - count_points(field, curve) as i64;
    TraceReport {
        curve: *curve,
        method: Method::Naive,
        raw: Complex64::new(trace as f64, 0.0),
        trace,
        residual_to_integer: 0.0,
        imag_residual: 0.0,
        auxiliary: None,
        root_traces: Vec::new(),
        singular: curve.is_singular(field),
    }
}

/// Substitutes `x ↦ x + r` in `y² = x³ + ax + b`, giving
/// `y² = x³ + 3r x² + (3r² + a) x + (r³ + ar + b)`.
pub fn shift_substitution(field: &Field, a: Elem, b: Elem, r: Elem) -> CurveSpec {
    let three = field.from_int(3);
    let r2 = field.mul(r, r);
    let r3 = field.mul(r2, r);
    CurveSpec::General {
        c2: field.mul(three, r),
        c1: field.add(field.mul(three, r2), a),
        c0: field.add(field.add(r3, field.mul(a, r)), b),
    }
}

/// Formula evaluator for one field, caching the two `₂F₁` kernels.
pub struct TraceFormulas<'f> {
    field: &'f Field,
    sextic: OnceLock<Option<HyperKernel>>,
    quartic: OnceLock<Option<HyperKernel>>,
}

impl<'f> TraceFormulas<'f> {
    pub fn new(field: &'f Field) -> Self {
        TraceFormulas {
            field,
            sextic: OnceLock::new(),
            quartic: OnceLock::new(),
        }
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    fn kernel(&self, den: u32) -> Result<&HyperKernel, TraceError> {
        let field = self.field;
        let cell = if den == 6 { &self.sextic } else { &self.quartic };
        cell.get_or_init(|| {
            let a = CharIndex::fraction(field, 1, den)?;
            let b = CharIndex::fraction(field, den as i64 - 1, den)?;
            let eps = CharIndex::trivial(field);
            Some(HyperKernel::new(field, &[a, b], &[eps]).expect("2F1 shape"))
        })
        .as_ref()
        .ok_or(TraceError::WrongCongruence {
            q: field.q(),
            modulus: den,
        })
    }

    fn require(&self, den: u32) -> Result<(), TraceError> {
        if self.field.q() % den != 1 {
            return Err(TraceError::WrongCongruence {
                q: self.field.q(),
                modulus: den,
            });
        }
        Ok(())
    }

    /// `T^{(q−1)/4}(−1)` as `±1`.
    fn quartic_sign(&self) -> f64 {
        CharIndex::fraction(self.field, 1, 4)
            .expect("q = 1 mod 4")
            .at_minus_one()
    }

    fn finish(
        &self,
        curve: CurveSpec,
        method: Method,
        raw: ComplexScalar,
    ) -> Result<TraceReport, TraceError> {
        let q = self.field.q() as f64;
        let trace = raw.re.round();
        let residual = (raw.re - trace).abs();
        let imag = raw.im.abs();
        if !(imag < IMAG_LIMIT_PER_Q * q) || !(residual < ROUNDING_LIMIT) {
            return Err(TraceError::PrecisionFailure {
                re: raw.re,
                im: raw.im,
            });
        }
        Ok(TraceReport {
            curve,
            method,
            raw,
            trace: trace as i64,
            residual_to_integer: residual,
            imag_residual: imag,
            auxiliary: None,
            root_traces: Vec::new(),
            singular: false,
        })
    }

    /// Trace of `y² = x³ + cx² + d`, `q ≡ 1 (mod 6)`.
    pub fn thm_3_1(&self, c: Elem, d: Elem) -> Result<TraceReport, TraceError> {
        let f = self.field;
        self.require(6)?;
        if c.is_zero() {
            return Err(TraceError::ZeroC);
        }
        let curve = CurveSpec::E1 { c, d };
        if curve.is_singular(f) {
            return Err(TraceError::Singular);
        }
        let c3 = f.mul(f.mul(c, c), c);
        let num = f.mul(f.from_int(-27), d);
        let den = f.mul(f.from_int(4), c3);
        let arg = f.div(num, den).expect("c and p are nonzero");
        let value = self.kernel(6)?.eval(f, arg);
        let sign = quadratic_char(f, f.mul(f.from_int(-3), c));
        let raw = value * (-(f.q() as f64) * sign);
        self.finish(curve, Method::Thm31, raw)
    }

    /// Trace of `y² = x³ + fx² + gx`, `q ≡ 1 (mod 4)`.
    pub fn thm_3_2(&self, fc: Elem, g: Elem) -> Result<TraceReport, TraceError> {
        let f = self.field;
        self.require(4)?;
        if fc.is_zero() {
            return Err(TraceError::ZeroF);
        }
        let curve = CurveSpec::E2 { f: fc, g };
        if curve.is_singular(f) {
            return Err(TraceError::Singular);
        }
        let arg = f
            .div(f.mul(f.from_int(4), g), f.mul(fc, fc))
            .expect("f is nonzero");
        let value = self.kernel(4)?.eval(f, arg);
        let sign = quadratic_char(f, f.mul(f.from_int(2), fc)) * self.quartic_sign();
        let raw = value * (-(f.q() as f64) * sign);
        self.finish(curve, Method::Thm32, raw)
    }

    fn thm_1_1_at(&self, a: Elem, b: Elem, k: Elem) -> Result<TraceReport, TraceError> {
        let f = self.field;
        let k3 = f.mul(f.mul(k, k), k);
        let d = f.add(f.add(k3, f.mul(a, k)), b);
        let arg = f
            .div(f.neg(d), f.mul(f.from_int(4), k3))
            .expect("k is nonzero");
        let value = self.kernel(6)?.eval(f, arg);
        let sign = quadratic_char(f, f.neg(k));
        let raw = value * (-(f.q() as f64) * sign);
        let mut report = self.finish(CurveSpec::Short { a, b }, Method::Thm11, raw)?;
        report.auxiliary = Some(k);
        Ok(report)
    }

    /// The square roots `k` of `−a/3`, after the applicability checks.
    pub fn thm_1_1_roots(&self, a: Elem, b: Elem) -> Result<[Elem; 2], TraceError> {
        let f = self.field;
        self.require(6)?;
        if a.is_zero() {
            return Err(TraceError::ZeroA);
        }
        let target = f.div(f.neg(a), f.from_int(3)).expect("p > 3");
        let (k1, k2) = f.sqrt_opt(target).ok_or(TraceError::NonResidue)?;
        if (CurveSpec::Short { a, b }).is_singular(f) {
            return Err(TraceError::Singular);
        }
        Ok([k1, k2])
    }

    /// Trace of `y² = x³ + ax + b` through `k` with `3k² + a = 0`.
    pub fn thm_1_1(&self, a: Elem, b: Elem) -> Result<TraceReport, TraceError> {
        let roots = self.thm_1_1_roots(a, b)?;
        let mut reports = roots
            .iter()
            .map(|&k| self.thm_1_1_at(a, b, k))
            .collect::<Result<Vec<_>, _>>()?;
        let root_traces = reports
            .iter()
            .map(|r| (r.auxiliary.unwrap(), r.trace))
            .collect();
        let mut report = reports.swap_remove(0);
        report.root_traces = root_traces;
        Ok(report)
    }

    /// Same trace via `x ↦ x + k` followed by [`TraceFormulas::thm_3_1`].
    pub fn thm_1_1_via_shift(&self, a: Elem, b: Elem) -> Result<TraceReport, TraceError> {
        let [k, _] = self.thm_1_1_roots(a, b)?;
        let [c2, c1, c0] = shift_substitution(self.field, a, b, k).cubic();
        debug_assert!(c1.is_zero());
        let mut report = self.thm_3_1(c2, c0)?;
        report.auxiliary = Some(k);
        Ok(report)
    }

    fn thm_1_2_at(&self, a: Elem, b: Elem, h: Elem) -> Result<TraceReport, TraceError> {
        let f = self.field;
        let h2 = f.mul(h, h);
        let num = f.add(f.mul(f.from_int(12), h2), f.mul(f.from_int(4), a));
        let den = f.mul(f.from_int(9), h2);
        let arg = f.div(num, den).map_err(|_| TraceError::CharacteristicThree)?;
        let value = self.kernel(4)?.eval(f, arg);
        let sign = quadratic_char(f, f.mul(f.from_int(6), h)) * self.quartic_sign();
        let raw = value * (-(f.q() as f64) * sign);
        let mut report = self.finish(CurveSpec::Short { a, b }, Method::Thm12, raw)?;
        report.auxiliary = Some(h);
        Ok(report)
    }

    /// Nonzero roots `h` of `x³ + ax + b`, after the applicability checks.
    pub fn thm_1_2_roots(&self, a: Elem, b: Elem) -> Result<Vec<Elem>, TraceError> {
        let f = self.field;
        self.require(4)?;
        if f.q() == 9 {
            return Err(TraceError::ExcludedQ);
        }
        if f.p() == 3 {
            return Err(TraceError::CharacteristicThree);
        }
        let roots: Vec<Elem> = f
            .roots_of_cubic(a, b)
            .into_iter()
            .filter(|h| !h.is_zero())
            .collect();
        if roots.is_empty() {
            return Err(TraceError::NoNonzeroRoot);
        }
        if (CurveSpec::Short { a, b }).is_singular(f) {
            return Err(TraceError::Singular);
        }
        Ok(roots)
    }

    /// Trace of `y² = x³ + ax + b` through a nonzero root `h`.
    pub fn thm_1_2(&self, a: Elem, b: Elem) -> Result<TraceReport, TraceError> {
        let roots = self.thm_1_2_roots(a, b)?;
        let mut reports = roots
            .iter()
            .map(|&h| self.thm_1_2_at(a, b, h))
            .collect::<Result<Vec<_>, _>>()?;
        let root_traces = reports
            .iter()
            .map(|r| (r.auxiliary.unwrap(), r.trace))
            .collect();
        let mut report = reports.swap_remove(0);
        report.root_traces = root_traces;
        Ok(report)
    }

    /// Same trace via `x ↦ x + h` followed by [`TraceFormulas::thm_3_2`].
    pub fn thm_1_2_via_shift(&self, a: Elem, b: Elem) -> Result<TraceReport, TraceError> {
        let h = self.thm_1_2_roots(a, b)?[0];
        let [c2, c1, c0] = shift_substitution(self.field, a, b, h).cubic();
        debug_assert!(c0.is_zero());
        let mut report = self.thm_3_2(c2, c1)?;
        report.auxiliary = Some(h);
        Ok(report)
    }
}

pub fn trace_thm_3_1(field: &Field, c: Elem, d: Elem) -> Result<TraceReport, TraceError> {
    TraceFormulas::new(field).thm_3_1(c, d)
}

pub fn trace_thm_3_2(field: &Field, f: Elem, g: Elem) -> Result<TraceReport, TraceError> {
    TraceFormulas::new(field).thm_3_2(f, g)
}

pub fn trace_thm_1_1(field: &Field, a: Elem, b: Elem) -> Result<TraceReport, TraceError> {
    TraceFormulas::new(field).thm_1_1(a, b)
}

pub fn trace_thm_1_2(field: &Field, a: Elem, b: Elem) -> Result<TraceReport, TraceError> {
    TraceFormulas::new(field).thm_1_2(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts `(x, y)` pairs directly over a prime field.
    fn brute_count(p: u32, rhs: impl Fn(i64) -> i64) -> u64 {
        let p = p as i64;
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                if (y * y - rhs(x)).rem_euclid(p) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    fn short(f: &Field, a: i64, b: i64) -> CurveSpec {
        CurveSpec::Short {
            a: f.from_int(a),
            b: f.from_int(b),
        }
    }

    #[test]
    fn count_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(brute_count(5, |x| x * x * x + x), 4);
        assert_eq!(count_points(&f5, &short(&f5, 1, 0)), 4);
        assert_eq!(brute_count(7, |x| x * x * x + 1), 12);
        assert_eq!(count_points(&f7, &short(&f7, 0, 1)), 12);
        assert_eq!(brute_count(5, |x| x * x * x + 2 * x + 1), 7);
        assert_eq!(count_points(&f5, &short(&f5, 2, 1)), 7);
    }

    #[test]
    fn naive_trace_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(trace_naive(&f5, &short(&f5, 1, 0)).trace, 2);
        assert_eq!(trace_naive(&f7, &short(&f7, 0, 1)).trace, -4);
        let r = trace_naive(&f5, &short(&f5, 2, 1));
        assert_eq!(r.trace, -1);
        assert_eq!(r.raw, Complex64::new(-1.0, 0.0));
        assert_eq!(r.residual_to_integer, 0.0);
        assert!(!r.singular);
        assert!(trace_naive(&f5, &short(&f5, 0, 0)).singular);
    }

    #[test]
    fn singularity_matches_shape_forms() {
        let f = Field::new(13, 1).unwrap();
        for u in f.elements() {
            for v in f.elements() {
                let (uu, vv) = (u.index() as i64, v.index() as i64);
                let short_disc = (4 * uu.pow(3) + 27 * vv.pow(2)) % 13 == 0;
                assert_eq!(CurveSpec::Short { a: u, b: v }.is_singular(&f), short_disc);
                let e1 = (vv * (4 * uu.pow(3) + 27 * vv)) % 13 == 0;
                assert_eq!(CurveSpec::E1 { c: u, d: v }.is_singular(&f), e1);
                let e2 = (vv * (uu * uu - 4 * vv)) % 13 == 0;
                assert_eq!(CurveSpec::E2 { f: u, g: v }.is_singular(&f), e2);
            }
        }
    }

    #[test]
    fn shift_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let s = shift_substitution(&f5, Elem::ONE, Elem::ZERO, f5.from_int(2));
        assert_eq!(s.cubic(), [f5.from_int(1), f5.from_int(3), f5.from_int(0)]);
        let f7 = Field::new(7, 1).unwrap();
        let (a, b) = (f7.from_int(4), f7.from_int(6));
        assert_eq!(
            shift_substitution(&f7, a, b, Elem::ZERO).cubic(),
            [Elem::ZERO, a, b]
        );
        let shifted = shift_substitution(&f7, Elem::ONE, Elem::ONE, f7.from_int(3));
        assert_eq!(brute_count(7, |x| x * x * x + x + 1), 5);
        assert_eq!(brute_count(7, |x| (x + 3).pow(3) + (x + 3) + 1), 5);
        assert_eq!(count_points(&f7, &short(&f7, 1, 1)), 5);
        assert_eq!(count_points(&f7, &shifted), 5);
    }

    #[test]
    fn thm_3_1_examples() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(brute_count(7, |x| x * x * x + x * x + 1), 11);
        let r = trace_thm_3_1(&f7, Elem::ONE, Elem::ONE).unwrap();
        assert_eq!(r.trace, -3);
        assert!(r.residual_to_integer < 1e-9);
        assert_eq!(
            trace_thm_3_1(&f7, Elem::ONE, Elem::ZERO),
            Err(TraceError::Singular)
        );
        assert_eq!(
            trace_thm_3_1(&f7, Elem::ZERO, Elem::ONE),
            Err(TraceError::ZeroC)
        );
        let f13 = Field::new(13, 1).unwrap();
        // 13 + 1 − #E for y² = x³ + 2x² + 1 by direct enumeration.
        let oracle = 14 - brute_count(13, |x| x * x * x + 2 * x * x + 1) as i64;
        assert_eq!(oracle, 0);
        assert_eq!(trace_thm_3_1(&f13, f13.from_int(2), Elem::ONE).unwrap().trace, oracle);
    }

    #[test]
    fn thm_3_2_examples() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(6 - brute_count(5, |x| x * x * x + x * x + 3 * x) as i64, 2);
        assert_eq!(trace_thm_3_2(&f5, Elem::ONE, f5.from_int(3)).unwrap().trace, 2);
        assert_eq!(
            trace_thm_3_2(&f5, Elem::ONE, Elem::ZERO),
            Err(TraceError::Singular)
        );
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(
            trace_thm_3_2(&f7, Elem::ONE, Elem::ONE),
            Err(TraceError::WrongCongruence { q: 7, modulus: 4 })
        );
    }

    #[test]
    fn thm_1_1_examples() {
        let f13 = Field::new(13, 1).unwrap();
        let oracle = 14 - brute_count(13, |x| x * x * x + 10 * x + 3) as i64;
        assert_eq!(oracle, -2);
        let r = trace_thm_1_1(&f13, f13.from_int(10), f13.from_int(3)).unwrap();
        assert_eq!(r.trace, oracle);
        assert_eq!(r.auxiliary, Some(Elem::ONE));
        assert_eq!(
            r.root_traces,
            vec![(Elem::ONE, -2), (f13.from_int(12), -2)]
        );
        assert!(r.roots_agree());
        assert_eq!(
            trace_thm_1_1(&f13, Elem::ZERO, Elem::ONE),
            Err(TraceError::ZeroA)
        );
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(
            trace_thm_1_1(&f7, f7.from_int(3), Elem::ONE),
            Err(TraceError::NonResidue)
        );
    }

    #[test]
    fn thm_1_2_examples() {
        let f5 = Field::new(5, 1).unwrap();
        let r = trace_thm_1_2(&f5, Elem::ONE, Elem::ZERO).unwrap();
        assert_eq!(r.trace, 2);
        assert_eq!(r.root_traces, vec![(f5.from_int(2), 2), (f5.from_int(3), 2)]);
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(
            trace_thm_1_2(&f9, Elem::ONE, Elem::ONE),
            Err(TraceError::ExcludedQ)
        );
        let f81 = Field::new(3, 4).unwrap();
        assert_eq!(
            trace_thm_1_2(&f81, Elem::ONE, Elem::ONE),
            Err(TraceError::CharacteristicThree)
        );
        let f13 = Field::new(13, 1).unwrap();
        // x³ + x + 1 over F_13 has the single root 7 (exhaustive scan).
        let roots: Vec<i64> = (0..13).filter(|x| (x * x * x + x + 1) % 13 == 0).collect();
        assert_eq!(roots, vec![7]);
        let r = trace_thm_1_2(&f13, Elem::ONE, Elem::ONE).unwrap();
        assert_eq!(r.auxiliary, Some(f13.from_int(7)));
        assert_eq!(r.trace, 14 - brute_count(13, |x| x * x * x + x + 1) as i64);
        // x³ + 2 over F_13: 2 is not a cube, no root at all.
        assert!((0..13).all(|x: i64| (x * x * x + 2) % 13 != 0));
        assert_eq!(
            trace_thm_1_2(&f13, Elem::ZERO, f13.from_int(2)),
            Err(TraceError::NoNonzeroRoot)
        );
    }

    #[test]
    fn shift_paths_agree_small() {
        let f13 = Field::new(13, 1).unwrap();
        let tf = TraceFormulas::new(&f13);
        for a in f13.nonzero() {
            for b in f13.elements() {
                if let Ok(r) = tf.thm_1_1(a, b) {
                    assert_eq!(tf.thm_1_1_via_shift(a, b).unwrap().trace, r.trace);
                }
                if let Ok(r) = tf.thm_1_2(a, b) {
                    assert_eq!(tf.thm_1_2_via_shift(a, b).unwrap().trace, r.trace);
                }
            }
        }
    }
}
