//! Greene's Gaussian hypergeometric series over `F_q`.
//!
//! `{n+1}F_n(A_0..A_n; B_1..B_n | x) = q/(q−1) Σ_χ (A_0χ choose χ) Π (A_iχ choose B_iχ) χ(x)`.
//!
//! A [`HyperKernel`] stores the character-indexed coefficients once, so a
//! single value is a length-`(q−1)` dot product and the full table over all
//! `x` is one transform.

use num_complex::Complex64;
use thiserror::Error;

use crate::char_sums::greene_binomial;
use crate::characters::{CharIndex, ComplexScalar};
use crate::dft;
use crate::field::{Elem, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("expected {expected} lower parameters, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("at least one upper parameter is required")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperSpec {
    top: Vec<CharIndex>,
    bottom: Vec<CharIndex>,
    argument: Elem,
}

impl HyperSpec {
    pub fn new(
        top: Vec<CharIndex>,
        bottom: Vec<CharIndex>,
        argument: Elem,
    ) -> Result<HyperSpec, HyperError> {
        if top.is_empty() {
            return Err(HyperError::Empty);
        }
        if top.len() != bottom.len() + 1 {
            return Err(HyperError::ShapeMismatch {
                expected: top.len() - 1,
                got: bottom.len(),
            });
        }
        Ok(HyperSpec {
            top,
            bottom,
            argument,
        })
    }

    pub fn top(&self) -> &[CharIndex] {
        &self.top
    }

    pub fn bottom(&self) -> &[CharIndex] {
        &self.bottom
    }

    pub fn argument(&self) -> Elem {
        self.argument
    }
}

/// Precomputed `q/(q−1) · Π_i (A_i T^l choose B_i T^l)` for `l = 0..q−2`.
#[derive(Clone, Debug)]
pub struct HyperKernel {
    coeffs: Vec<ComplexScalar>,
}

impl HyperKernel {
    pub fn new(
        field: &Field,
        top: &[CharIndex],
        bottom: &[CharIndex],
    ) -> Result<HyperKernel, HyperError> {
        if top.is_empty() {
            return Err(HyperError::Empty);
        }
        if top.len() != bottom.len() + 1 {
            return Err(HyperError::ShapeMismatch {
                expected: top.len() - 1,
                got: bottom.len(),
            });
        }
        let n = field.group_order();
        let scale = field.q() as f64 / n as f64;
        let eps = CharIndex::trivial(field);
        let coeffs = (0..n as i64)
            .map(|l| {
                let chi = CharIndex::new(field, l);
                let lowers = std::iter::once(eps).chain(bottom.iter().copied());
                top.iter()
                    .zip(lowers)
                    .map(|(&a, b)| greene_binomial(field, a.mul(chi), b.mul(chi)))
                    .product::<Complex64>()
                    * scale
            })
            .collect();
        Ok(HyperKernel { coeffs })
    }

    pub fn coefficients(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    /// Value at `x`; zero at `x = 0` since every `χ(0) = 0`.
    pub fn eval(&self, field: &Field, x: Elem) -> ComplexScalar {
        if x.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.coeffs.len();
        let step = field.discrete_log(x).expect("x is nonzero") as usize;
        let unity = field.unity_table();
        let mut k = 0usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.coeffs {
            acc += c * unity[k];
            k += step;
            if k >= n {
                k -= n;
            }
        }
        acc
    }

    /// Values at every element, indexed by canonical element index.
    pub fn eval_all(&self, field: &Field) -> Vec<ComplexScalar> {
        let along_orbit = dft::bluestein(&self.coeffs);
        let mut out = vec![Complex64::new(0.0, 0.0); field.q() as usize];
        for (j, v) in along_orbit.into_iter().enumerate() {
            out[field.exp(j as u64).index() as usize] = v;
        }
        out
    }
}

pub fn hyper_npfn(field: &Field, spec: &HyperSpec) -> ComplexScalar {
    HyperKernel::new(field, &spec.top, &spec.bottom)
        .expect("HyperSpec shape is validated on construction")
        .eval(field, spec.argument)
}

/// `₂F₁(A, B; C | x)`.
pub fn hyper_2f1(
    field: &Field,
    a: CharIndex,
    b: CharIndex,
    c: CharIndex,
    x: Elem,
) -> ComplexScalar {
    HyperKernel::new(field, &[a, b], &[c])
        .expect("two upper and one lower parameter")
        .eval(field, x)
}
