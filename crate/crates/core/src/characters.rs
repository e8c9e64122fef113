//! Additive character `θ` and multiplicative characters `T^m`.
//!
//! `T` is fixed by `T(g) = e^{2πi/(q−1)}` for the field generator `g`, and
//! every multiplicative character is extended to zero by `χ(0) = 0`,
//! including the trivial one.

use std::fmt;

use num_complex::Complex64;

use crate::field::{Elem, Field};

pub type ComplexScalar = Complex64;

/// Exponent `m` naming the character `T^m`, reduced mod `q − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharIndex {
    m: u32,
    modulus: u32,
}

impl CharIndex {
    pub fn new(field: &Field, m: i64) -> CharIndex {
        let n = field.group_order();
        CharIndex {
            m: m.rem_euclid(n as i64) as u32,
            modulus: n,
        }
    }

    pub fn trivial(field: &Field) -> CharIndex {
        CharIndex::new(field, 0)
    }

    /// `T^{num·(q−1)/den}`, defined only when `den | q − 1`.
    pub fn fraction(field: &Field, num: i64, den: u32) -> Option<CharIndex> {
        let n = field.group_order();
        (den != 0 && n % den == 0).then(|| CharIndex::new(field, num * (n / den) as i64))
    }

    /// The quadratic character `T^{(q−1)/2}`.
    pub fn quadratic(field: &Field) -> CharIndex {
        CharIndex::fraction(field, 1, 2).expect("q is odd")
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.m
    }

    #[inline]
    pub fn is_trivial(self) -> bool {
        self.m == 0
    }

    /// Character product `T^a · T^b = T^{a+b}`.
    pub fn mul(self, other: CharIndex) -> CharIndex {
        debug_assert_eq!(self.modulus, other.modulus);
        CharIndex {
            m: ((self.m as u64 + other.m as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }

    /// Inverse (complex conjugate) character `T^{−m}`.
    pub fn inv(self) -> CharIndex {
        CharIndex {
            m: (self.modulus - self.m) % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn pow(self, k: i64) -> CharIndex {
        let n = self.modulus as i64;
        CharIndex {
            m: ((self.m as i64 * k.rem_euclid(n)) % n) as u32,
            modulus: self.modulus,
        }
    }

    /// `T^m(−1) = (−1)^m`, since `−1 = g^{(q−1)/2}`.
    #[inline]
    pub fn at_minus_one(self) -> f64 {
        if self.m % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for CharIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^{}", self.m)
    }
}

/// `θ(x) = e^{2πi·tr(x)/p}`.
#[inline]
pub fn additive_char(field: &Field, x: Elem) -> ComplexScalar {
    field.zeta(field.trace_to_prime(x))
}

/// `T^m(x)`, zero at `x = 0` for every `m`.
#[inline]
pub fn mult_char(field: &Field, m: CharIndex, x: Elem) -> ComplexScalar {
    if x.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    field.unity(m.index() as u64 * field.log_unchecked(x) as u64)
}

/// Real value of a character of order dividing 2 (`±1` or `0`).
pub(crate) fn quadratic_char(field: &Field, x: Elem) -> f64 {
    if x.is_zero() {
        0.0
    } else if field.is_square(x) {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orthogonality {
    /// `Σ_x T^n(x)` against `q − 1` or `0`.
    CharSumOverX(CharIndex),
    /// `Σ_n T^n(x)` against `q − 1` when `x = 1`, else `0`.
    CharSumOverN(Elem),
    /// `Σ_z θ(z·v)` against `q` when `v = 0`, else `0`.
    Delta(Elem),
}

/// Returns `|computed − expected|` for the chosen orthogonality relation.
pub fn check_orthogonality(field: &Field, kind: Orthogonality) -> f64 {
    let q = field.q() as f64;
    let (computed, expected): (Complex64, f64) = match kind {
        Orthogonality::CharSumOverX(n) => (
            field.elements().map(|x| mult_char(field, n, x)).sum(),
            if n.is_trivial() { q - 1.0 } else { 0.0 },
        ),
        Orthogonality::CharSumOverN(x) => (
            (0..field.group_order() as i64)
                .map(|n| mult_char(field, CharIndex::new(field, n), x))
                .sum(),
            if x == Elem::ONE { q - 1.0 } else { 0.0 },
        ),
        Orthogonality::Delta(v) => (
            field
                .elements()
                .map(|z| additive_char(field, field.mul(z, v)))
                .sum(),
            if v.is_zero() { q } else { 0.0 },
        ),
    };
    (computed - expected).norm()
}
