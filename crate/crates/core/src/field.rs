//! Prime-power fields `F_q`, `q = p^e`, with table-driven arithmetic.
//!
//! Elements are stored by their canonical index `Σ digits[i]·p^i`, where the
//! digits are the little-endian coefficients in the polynomial basis
//! `1, α, α², …` of the modulus. Multiplication goes through discrete-log
//! tables built from a primitive element; addition is digit-wise mod `p`.
//!
//! Construction is deterministic: the modulus is the smallest monic
//! irreducible polynomial (coefficients compared low degree first) and the
//! generator is the smallest primitive element in canonical order.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::char_sums::GaussSumTable;

/// Default upper bound on `q`; all tables are `O(q)`.
pub const DEFAULT_MAX_ORDER: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} is below the minimum of 5")]
    TooSmall(u64),
    #[error("field order {q} exceeds the configured bound {bound}")]
    TooLarge { q: u64, bound: u64 },
    #[error("element index {index} is out of range for q = {q}")]
    OutOfRange { index: u64, q: u64 },
    #[error("element {0} is not a generator of the multiplicative group")]
    NotPrimitive(String),
    #[error("zero has no discrete logarithm")]
    NoDiscreteLog,
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("malformed element encoding {0:?}")]
    BadEncoding(String),
}

/// A field element, identified by its canonical index in `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    generator: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    /// `unity[k] = e^{2πik/(q−1)}`.
    unity: Vec<Complex64>,
    /// `zeta[t] = e^{2πit/p}`.
    zeta: Vec<Complex64>,
    pub(crate) gauss_cache: OnceLock<GaussSumTable>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish_non_exhaustive()
    }
}

impl Field {
    /// Builds `F_{p^e}` under [`DEFAULT_MAX_ORDER`].
    pub fn new(p: u64, e: u32) -> Result<Field, FieldError> {
        Field::with_bound(p, e, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(p: u64, e: u32, bound: u64) -> Result<Field, FieldError> {
        let base = Base::new(p, e, bound)?;
        let generator = base.smallest_generator();
        Ok(base.finish(generator))
    }

    /// Builds the field with an explicitly chosen primitive element, given
    /// by its canonical index. The modulus is the same as for [`Field::new`].
    pub fn with_generator(p: u64, e: u32, generator: u32) -> Result<Field, FieldError> {
        let base = Base::new(p, e, DEFAULT_MAX_ORDER)?;
        if generator as u64 >= base.q as u64 || !base.is_primitive(generator) {
            return Err(FieldError::NotPrimitive(generator.to_string()));
        }
        Ok(base.finish(generator))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of the multiplicative group, `q − 1`.
    #[inline]
    pub fn group_order(&self) -> u32 {
        self.q - 1
    }

    /// Non-leading coefficients `c_0..c_{e−1}` of the monic modulus, or
    /// `None` for a prime field.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    #[inline]
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elem(&self, index: u64) -> Result<Elem, FieldError> {
        if index >= self.q as u64 {
            return Err(FieldError::OutOfRange {
                index,
                q: self.q as u64,
            });
        }
        Ok(Elem(index as u32))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem, FieldError> {
        if digits.len() > self.e as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(FieldError::BadEncoding(format!("{digits:?}")));
        }
        let mut index = 0u32;
        for &d in digits.iter().rev() {
            index = index * self.p + d;
        }
        Ok(Elem(index))
    }

    /// Little-endian digits of `x`, always of length `e`.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let mut rest = x.0;
        (0..self.e)
            .map(|_| {
                let d = rest % self.p;
                rest /= self.p;
                d
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        let p = self.p;
        if self.e == 1 {
            return Elem((x.0 + y.0) % p);
        }
        let (mut a, mut b) = (x.0, y.0);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        let p = self.p;
        if self.e == 1 {
            return Elem((p - x.0) % p);
        }
        let mut a = x.0;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() || y.is_zero() {
            return Elem::ZERO;
        }
        let n = self.group_order();
        let mut k = self.log[x.0 as usize] + self.log[y.0 as usize];
        if k >= n {
            k -= n;
        }
        Elem(self.exp[k as usize])
    }

    pub fn inv(&self, x: Elem) -> Result<Elem, FieldError> {
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.group_order();
        let k = self.log[x.0 as usize];
        Ok(Elem(self.exp[((n - k) % n) as usize]))
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^k`, with `0^0 = 1`.
    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if x.is_zero() {
            return Elem::ZERO;
        }
        let n = self.group_order() as u64;
        let j = (self.log[x.0 as usize] as u64 * (k % n)) % n;
        Elem(self.exp[j as usize])
    }

    /// `g^j` for the field generator `g`.
    #[inline]
    pub fn exp(&self, j: u64) -> Elem {
        Elem(self.exp[(j % self.group_order() as u64) as usize])
    }

    pub fn discrete_log(&self, x: Elem) -> Result<u32, FieldError> {
        if x.is_zero() {
            return Err(FieldError::NoDiscreteLog);
        }
        Ok(self.log[x.0 as usize])
    }

    /// Discrete log without the zero check; callers guarantee `x ≠ 0`.
    #[inline]
    pub(crate) fn log_unchecked(&self, x: Elem) -> u32 {
        debug_assert!(!x.is_zero());
        self.log[x.0 as usize]
    }

    /// `x + x^p + ⋯ + x^{p^{e−1}}` as a residue mod `p`.
    #[inline]
    pub fn trace_to_prime(&self, x: Elem) -> u32 {
        self.trace[x.0 as usize]
    }

    /// Nonzero squares have even discrete log; zero counts as a square.
    #[inline]
    pub fn is_square(&self, x: Elem) -> bool {
        x.is_zero() || self.log[x.0 as usize] % 2 == 0
    }

    /// Both square roots of `x` in canonical order, `(0, 0)` for zero, or
    /// `None` for a non-residue.
    pub fn sqrt_opt(&self, x: Elem) -> Option<(Elem, Elem)> {
        if x.is_zero() {
            return Some((Elem::ZERO, Elem::ZERO));
        }
        let k = self.log[x.0 as usize];
        if k % 2 != 0 {
            return None;
        }
        let r = Elem(self.exp[(k / 2) as usize]);
        let s = self.neg(r);
        Some((r.min(s), r.max(s)))
    }

    /// All roots of `x³ + ax + b` in canonical order, found by scanning.
    pub fn roots_of_cubic(&self, a: Elem, b: Elem) -> Vec<Elem> {
        self.elements()
            .filter(|&x| {
                let x3 = self.mul(self.mul(x, x), x);
                let v = self.add(self.add(x3, self.mul(a, x)), b);
                v.is_zero()
            })
            .collect()
    }

    pub fn is_primitive(&self, x: Elem) -> bool {
        !x.is_zero() && gcd(self.log[x.0 as usize], self.group_order()) == 1
    }

    /// All primitive elements in canonical order.
    pub fn primitive_elements(&self) -> Vec<Elem> {
        self.nonzero().filter(|&x| self.is_primitive(x)).collect()
    }

    /// `e^{2πik/(q−1)}` for `k` reduced mod `q − 1`.
    #[inline]
    pub(crate) fn unity(&self, k: u64) -> Complex64 {
        self.unity[(k % self.group_order() as u64) as usize]
    }

    #[inline]
    pub(crate) fn unity_table(&self) -> &[Complex64] {
        &self.unity
    }

    #[inline]
    pub(crate) fn zeta(&self, t: u32) -> Complex64 {
        self.zeta[t as usize]
    }

    /// Text form: decimal for prime fields, little-endian comma-separated
    /// digits otherwise (`"2,1"` is `2 + α`).
    pub fn encode(&self, x: Elem) -> String {
        if self.e == 1 {
            return x.0.to_string();
        }
        self.digits(x)
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(&self, text: &str) -> Result<Elem, FieldError> {
        let bad = || FieldError::BadEncoding(text.to_string());
        let text = text.trim();
        if self.e == 1 {
            let v: u64 = text.parse().map_err(|_| bad())?;
            return self.elem(v).map_err(|_| bad());
        }
        let digits = text
            .split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        if digits.len() != self.e as usize {
            return Err(bad());
        }
        self.from_digits(&digits).map_err(|_| bad())
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `Some((p, e))` when `n = p^e` for a prime `p`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(n);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut m = n;
    while m > 1 {
        m /= p;
        e += 1;
    }
    Some((p, e))
}

/// Polynomial arithmetic over `Z/p` used only while the tables are built.
struct Base {
    p: u32,
    e: u32,
    q: u32,
    /// Full modulus coefficients `c_0..c_{e−1}` (leading 1 implicit).
    modulus: Vec<u32>,
}

impl Base {
    fn new(p: u64, e: u32, bound: u64) -> Result<Base, FieldError> {
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= bound.min(u32::MAX as u64))
            .ok_or(FieldError::TooLarge {
                q: p.saturating_pow(e),
                bound,
            })?;
        if q < 5 {
            return Err(FieldError::TooSmall(q));
        }
        let mut base = Base {
            p: p as u32,
            e,
            q: q as u32,
            modulus: Vec::new(),
        };
        if e > 1 {
            base.modulus = base.smallest_irreducible();
        }
        Ok(base)
    }

    fn to_poly(&self, index: u32) -> Vec<u32> {
        let mut rest = index;
        (0..self.e)
            .map(|_| {
                let d = rest % self.p;
                rest /= self.p;
                d
            })
            .collect()
    }

    fn from_poly(&self, poly: &[u32]) -> u32 {
        poly.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Product of two canonical indices modulo the field modulus.
    fn mul(&self, x: u32, y: u32) -> u32 {
        let p = self.p as u64;
        if self.e == 1 {
            return ((x as u64 * y as u64) % p) as u32;
        }
        let a = self.to_poly(x);
        let b = self.to_poly(y);
        let prod = poly_mul(&a, &b, p);
        self.from_poly(&poly_rem_monic(prod, &self.modulus, p))
    }

    fn pow(&self, x: u32, mut k: u64) -> u32 {
        let mut acc = 1;
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn is_primitive(&self, x: u32) -> bool {
        if x == 0 {
            return false;
        }
        let n = (self.q - 1) as u64;
        prime_factors(n)
            .into_iter()
            .all(|r| self.pow(x, n / r) != 1)
    }

    fn smallest_generator(&self) -> u32 {
        (1..self.q)
            .find(|&x| self.is_primitive(x))
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Enumerates monic degree-`e` polynomials with `c_0` as the most
    /// significant comparison key and returns the first irreducible one.
    fn smallest_irreducible(&self) -> Vec<u32> {
        let p = self.p as u64;
        let e = self.e as usize;
        let mut coeffs = vec![0u32; e];
        loop {
            if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
                return coeffs;
            }
            // Odometer with the highest-degree coefficient turning fastest.
            let mut i = e;
            loop {
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < self.p {
                    break;
                }
                coeffs[i] = 0;
                assert!(i > 0, "an irreducible polynomial of every degree exists");
            }
        }
    }

    fn finish(self, generator: u32) -> Field {
        let q = self.q as usize;
        let n = q - 1;
        let mut exp = vec![0u32; n];
        let mut log = vec![u32::MAX; q];
        let mut cur = 1u32;
        for (j, slot) in exp.iter_mut().enumerate() {
            *slot = cur;
            debug_assert_eq!(log[cur as usize], u32::MAX);
            log[cur as usize] = j as u32;
            cur = self.mul(cur, generator);
        }
        assert_eq!(cur, 1, "generator order must be q - 1");

        let p = self.p;
        let e = self.e;
        let mut field = Field {
            p,
            e,
            q: self.q,
            modulus: (e > 1).then_some(self.modulus),
            generator: Elem(generator),
            exp,
            log,
            trace: Vec::new(),
            unity: (0..n)
                .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
                .collect(),
            zeta: (0..p)
                .map(|t| Complex64::from_polar(1.0, TAU * t as f64 / p as f64))
                .collect(),
            gauss_cache: OnceLock::new(),
        };

        let mut trace = vec![0u32; q];
        for x in field.nonzero() {
            let mut acc = Elem::ZERO;
            let mut conj = x;
            for _ in 0..e {
                acc = field.add(acc, conj);
                conj = field.pow(conj, p as u64);
            }
            assert!(acc.0 < p, "trace must land in the prime subfield");
            trace[x.0 as usize] = acc.0;
        }
        field.trace = trace;
        field
    }
}

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u64) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
        }
    }
    poly_trim(out.into_iter().map(|v| v as u32).collect())
}

/// Remainder modulo the monic polynomial `x^e + Σ c_i x^i`; result padded to length `e`.
fn poly_rem_monic(mut a: Vec<u32>, low: &[u32], p: u64) -> Vec<u32> {
    let e = low.len();
    while a.len() > e {
        let top = a.pop().unwrap() as u64;
        if top != 0 {
            let shift = a.len() - e;
            for (i, &c) in low.iter().enumerate() {
                let v = &mut a[shift + i];
                *v = ((*v as u64 + p - (top * c as u64) % p) % p) as u32;
            }
        }
    }
    a.resize(e, 0);
    a
}

/// General remainder over `Z/p`; `b` must be nonzero.
fn poly_rem(a: &[u32], b: &[u32], p: u64) -> Vec<u32> {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let lead_inv = mod_pow(*b.last().unwrap() as u64, p - 2, p);
    while r.len() >= b.len() {
        let factor = (*r.last().unwrap() as u64 * lead_inv) % p;
        let shift = r.len() - b.len();
        for (i, &c) in b.iter().enumerate() {
            let v = &mut r[shift + i];
            *v = ((*v as u64 + p - (factor * c as u64) % p) % p) as u32;
        }
        r = poly_trim(r);
    }
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u64) -> Vec<u32> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_pow(mut b: u64, mut k: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        k >>= 1;
    }
    acc
}

/// Ben-Or test: `f` of degree `e` is irreducible iff
/// `gcd(x^{p^i} − x, f) = 1` for every `1 ≤ i ≤ e/2`.
fn is_irreducible(low: &[u32], p: u64) -> bool {
    let e = low.len();
    let mut full = low.to_vec();
    full.push(1);
    let mulmod = |a: &[u32], b: &[u32]| poly_rem_monic(poly_mul(a, b, p), low, p);
    let powmod = |base: &[u32], mut k: u64| {
        let mut acc = vec![0u32; e];
        acc[0] = 1;
        let mut b = base.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                acc = mulmod(&acc, &b);
            }
            b = mulmod(&b, &b);
            k >>= 1;
        }
        acc
    };
    let mut x = vec![0u32; e];
    x[1 % e] = 1;
    let mut frob = x.clone();
    for _ in 1..=e / 2 {
        frob = powmod(&frob, p);
        let mut diff = frob.clone();
        diff[1] = ((diff[1] as u64 + p - 1) % p) as u32;
        let g = poly_gcd(&full, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
