//! Gauss sums, Jacobi sums and Greene binomial coefficients.
//!
//! Along the generator orbit `x = g^j` the Gauss sums become a single
//! length-`(q−1)` transform, `G_m = Σ_j ω^{mj} θ(g^j)`, so the whole table
//! costs `O(q log q)` with [`crate::dft::bluestein`]. The direct method
//! evaluates the defining sum for every `m` and is kept as the reference.

use num_complex::Complex64;
use thiserror::Error;

use crate::characters::{additive_char, mult_char, CharIndex, ComplexScalar};
use crate::dft;
use crate::exec::Exec;
use crate::field::{Elem, Field};

/// Below this `q` the cached table is built directly.
pub const DEFAULT_CROSSOVER: u32 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussMethod {
    Direct,
    Dft,
}

/// `G_0..G_{q−2}` with `G_m = G(T^m)`.
#[derive(Clone, Debug)]
pub struct GaussSumTable {
    values: Vec<ComplexScalar>,
    method: GaussMethod,
}

impl GaussSumTable {
    #[inline]
    pub fn get(&self, m: CharIndex) -> ComplexScalar {
        self.values[m.index() as usize]
    }

    /// `G_m` for any integer `m`, read mod `q − 1`.
    #[inline]
    pub fn at(&self, m: i64) -> ComplexScalar {
        self.values[m.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn values(&self) -> &[ComplexScalar] {
        &self.values
    }

    pub fn method(&self) -> GaussMethod {
        self.method
    }
}

pub fn gauss_sum_table(field: &Field, method: GaussMethod) -> GaussSumTable {
    gauss_sum_table_with(field, method, Exec::default())
}

pub fn gauss_sum_table_with(field: &Field, method: GaussMethod, exec: Exec) -> GaussSumTable {
    let n = field.group_order() as usize;
    let values = match method {
        GaussMethod::Direct => exec.map_range(n, |m| {
            let chi = CharIndex::new(field, m as i64);
            field
                .elements()
                .map(|x| mult_char(field, chi, x) * additive_char(field, x))
                .sum()
        }),
        GaussMethod::Dft => {
            let orbit: Vec<Complex64> = (0..n as u64)
                .map(|j| additive_char(field, field.exp(j)))
                .collect();
            dft::bluestein(&orbit)
        }
    };
    GaussSumTable { values, method }
}

/// The field's cached Gauss-sum table, built on first use.
pub fn gauss_sums(field: &Field) -> &GaussSumTable {
    field.gauss_cache.get_or_init(|| {
        let method = if field.q() < DEFAULT_CROSSOVER {
            GaussMethod::Direct
        } else {
            GaussMethod::Dft
        };
        gauss_sum_table(field, method)
    })
}

/// `J(A, B) = Σ_x A(x) B(1 − x)` evaluated term by term.
pub fn jacobi_sum_direct(field: &Field, a: CharIndex, b: CharIndex) -> ComplexScalar {
    field
        .elements()
        .map(|x| mult_char(field, a, x) * mult_char(field, b, field.sub(Elem::ONE, x)))
        .sum()
}

/// `J(A, B)` from the cached Gauss sums: `G(A)G(B)/G(AB)` when `AB ≠ ε`,
/// otherwise `q − 2` for `A = B = ε` and `−A(−1)` for `B = Ā`.
pub fn jacobi_sum(field: &Field, a: CharIndex, b: CharIndex) -> ComplexScalar {
    let ab = a.mul(b);
    if ab.is_trivial() {
        if a.is_trivial() {
            return Complex64::new(field.q() as f64 - 2.0, 0.0);
        }
        return Complex64::new(-a.at_minus_one(), 0.0);
    }
    let g = gauss_sums(field);
    g.get(a) * g.get(b) / g.get(ab)
}

/// Greene's binomial `(A choose B) = B(−1)/q · J(A, B̄)`.
pub fn greene_binomial(field: &Field, a: CharIndex, b: CharIndex) -> ComplexScalar {
    jacobi_sum(field, a, b.inv()) * (b.at_minus_one() / field.q() as f64)
}

pub fn greene_binomial_direct(field: &Field, a: CharIndex, b: CharIndex) -> ComplexScalar {
    jacobi_sum_direct(field, a, b.inv()) * (b.at_minus_one() / field.q() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `θ(α) = 1/(q−1) Σ_m G_{−m} T^m(α)` for `α ≠ 0`.
    ThetaExpansion(Elem),
    /// `G_i G_{−i} = q T^i(−1)` for `T^i ≠ ε`.
    GaussInverse(CharIndex),
    /// `Π_{χ^m=1} G(χψ) = −G(ψ^m) ψ(m^{−m}) Π_{χ^m=1} G(χ)` for `q ≡ 1 (mod m)`.
    DavenportHasse { m: u32, psi: CharIndex },
    /// `G_m G_{−n} = q (T^m choose T^n) G_{m−n} T^n(−1)` for `T^{m−n} ≠ ε`.
    /// The binomial is taken from the definitional Jacobi sum.
    GaussBinomial { m: CharIndex, n: CharIndex },
}

impl Identity {
    /// Residual bound, scaled to the magnitude of the compared quantities.
    pub fn tolerance(&self, field: &Field) -> f64 {
        let q = field.q() as f64;
        match *self {
            Identity::DavenportHasse { m, .. } => 1e-8 * q.powf(m as f64 / 2.0),
            _ => 1e-8 * q,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("identity not applicable: {0}")]
    NotApplicable(&'static str),
}

/// `|LHS − RHS|` for the given identity instance.
pub fn check_identity(field: &Field, identity: Identity) -> Result<f64, IdentityError> {
    let g = gauss_sums(field);
    let q = field.q() as f64;
    let (lhs, rhs) = match identity {
        Identity::ThetaExpansion(alpha) => {
            if alpha.is_zero() {
                return Err(IdentityError::NotApplicable("alpha must be nonzero"));
            }
            let n = field.group_order() as i64;
            let sum: Complex64 = (0..n)
                .map(|m| g.at(-m) * mult_char(field, CharIndex::new(field, m), alpha))
                .sum();
            (additive_char(field, alpha), sum / (n as f64))
        }
        Identity::GaussInverse(i) => {
            if i.is_trivial() {
                return Err(IdentityError::NotApplicable("T^i must be nontrivial"));
            }
            (g.get(i) * g.get(i.inv()), Complex64::new(q * i.at_minus_one(), 0.0))
        }
        Identity::DavenportHasse { m, psi } => {
            if m == 0 || field.group_order() % m != 0 {
                return Err(IdentityError::NotApplicable("q must be 1 mod m"));
            }
            let roots: Vec<CharIndex> = (0..m as i64)
                .map(|k| CharIndex::fraction(field, k, m).expect("m divides q - 1"))
                .collect();
            let lhs: Complex64 = roots.iter().map(|&chi| g.get(chi.mul(psi))).product();
            let base: Complex64 = roots.iter().map(|&chi| g.get(chi)).product();
            let m_elem = field.from_int(m as i64);
            let m_pow = field
                .inv(field.pow(m_elem, m as u64))
                .expect("p does not divide m when q = 1 mod m");
            let rhs = -g.get(psi.pow(m as i64)) * mult_char(field, psi, m_pow) * base;
            (lhs, rhs)
        }
        Identity::GaussBinomial { m, n } => {
            let diff = m.mul(n.inv());
            if diff.is_trivial() {
                return Err(IdentityError::NotApplicable("T^(m-n) must be nontrivial"));
            }
            let binom = greene_binomial_direct(field, m, n);
            (
                g.get(m) * g.get(n.inv()),
                binom * g.get(diff) * (q * n.at_minus_one()),
            )
        }
    };
    Ok((lhs - rhs).norm())
}
