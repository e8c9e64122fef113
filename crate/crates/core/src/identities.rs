//! Exhaustive character-sum identity suite over every prime power `q ≤ q_max`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::char_sums::{check_identity, gauss_sums, Identity};
use crate::characters::{check_orthogonality, CharIndex, Orthogonality};
use crate::exec::Exec;
use crate::field::{Field, FieldError};
use crate::verify::{sweep_fields, Congruence};

/// Orthogonality residuals must stay below this multiple of `q`.
pub const ORTHOGONALITY_TOL_PER_Q: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    CharSumOverX,
    CharSumOverN,
    DeltaIdentity,
    ThetaExpansion,
    GaussInverse,
    DavenportHasse2,
    DavenportHasse3,
    GaussBinomial,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct KindSummary {
    pub checks: u64,
    pub failures: u64,
    /// Largest residual divided by its tolerance.
    pub worst_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityFailure {
    pub q: u32,
    pub kind: IdentityKind,
    pub params: String,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub q_max: u32,
    pub fields: Vec<u32>,
    pub kinds: BTreeMap<IdentityKind, KindSummary>,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    kinds: BTreeMap<IdentityKind, KindSummary>,
    failures: Vec<IdentityFailure>,
    q: u32,
}

impl Tally {
    fn record(&mut self, kind: IdentityKind, params: impl FnOnce() -> String, residual: f64, tol: f64) {
        let s = self.kinds.entry(kind).or_default();
        s.checks += 1;
        let ratio = residual / tol;
        if ratio > s.worst_ratio || ratio.is_nan() {
            s.worst_ratio = ratio;
        }
        if !(residual < tol) {
            s.failures += 1;
            self.failures.push(IdentityFailure {
                q: self.q,
                kind,
                params: params(),
                residual,
                tolerance: tol,
            });
        }
    }
}

/// Runs every identity over one field.
fn field_suite(field: &Field, exec: Exec) -> Tally {
    let q = field.q();
    let n = field.group_order() as i64;
    let ortho_tol = ORTHOGONALITY_TOL_PER_Q * q as f64;
    let mut tally = Tally {
        kinds: BTreeMap::new(),
        failures: Vec::new(),
        q,
    };
    gauss_sums(field);

    for m in 0..n {
        let r = check_orthogonality(field, Orthogonality::CharSumOverX(CharIndex::new(field, m)));
        tally.record(IdentityKind::CharSumOverX, || format!("n={m}"), r, ortho_tol);
    }
    for x in field.elements() {
        let r = check_orthogonality(field, Orthogonality::CharSumOverN(x));
        tally.record(IdentityKind::CharSumOverN, || format!("x={}", field.encode(x)), r, ortho_tol);
        let r = check_orthogonality(field, Orthogonality::Delta(x));
        tally.record(IdentityKind::DeltaIdentity, || format!("v={}", field.encode(x)), r, ortho_tol);
    }
    for alpha in field.nonzero() {
        let id = Identity::ThetaExpansion(alpha);
        let r = check_identity(field, id).expect("alpha nonzero");
        tally.record(
            IdentityKind::ThetaExpansion,
            || format!("alpha={}", field.encode(alpha)),
            r,
            id.tolerance(field),
        );
    }
    for i in 1..n {
        let id = Identity::GaussInverse(CharIndex::new(field, i));
        let r = check_identity(field, id).expect("T^i nontrivial");
        tally.record(IdentityKind::GaussInverse, || format!("i={i}"), r, id.tolerance(field));
    }
    for (m, kind) in [(2u32, IdentityKind::DavenportHasse2), (3, IdentityKind::DavenportHasse3)] {
        if (q - 1) % m != 0 {
            continue;
        }
        for psi in 0..n {
            let id = Identity::DavenportHasse {
                m,
                psi: CharIndex::new(field, psi),
            };
            let r = check_identity(field, id).expect("q = 1 mod m");
            tally.record(kind, || format!("m={m} psi={psi}"), r, id.tolerance(field));
        }
    }
    // O(q) per pair through the definitional Jacobi sum; rows run in parallel.
    let rows = exec.map_range(n as usize, |m| {
        (0..n)
            .filter(|&k| k != m as i64)
            .map(|k| {
                let id = Identity::GaussBinomial {
                    m: CharIndex::new(field, m as i64),
                    n: CharIndex::new(field, k),
                };
                (m as i64, k, check_identity(field, id).expect("m != n"), id.tolerance(field))
            })
            .collect::<Vec<_>>()
    });
    for (m, k, r, tol) in rows.into_iter().flatten() {
        tally.record(IdentityKind::GaussBinomial, || format!("m={m} n={k}"), r, tol);
    }
    tally
}

pub fn run_identities(q_max: u32, exec: Exec) -> Result<IdentityReport, FieldError> {
    let fields: Vec<(u32, u32, u32)> = sweep_fields(5, q_max, Congruence::All);
    let tallies = exec.map(fields.clone(), |(_, p, e)| -> Result<Tally, FieldError> {
        let field = Field::new(p as u64, e)?;
        Ok(field_suite(&field, exec))
    });
    let mut kinds: BTreeMap<IdentityKind, KindSummary> = BTreeMap::new();
    let mut failures = Vec::new();
    for t in tallies {
        let t = t?;
        for (k, s) in t.kinds {
            let agg = kinds.entry(k).or_default();
            agg.checks += s.checks;
            agg.failures += s.failures;
            agg.worst_ratio = agg.worst_ratio.max(s.worst_ratio);
        }
        failures.extend(t.failures);
    }
    Ok(IdentityReport {
        q_max,
        fields: fields.iter().map(|f| f.0).collect(),
        kinds,
        failures,
    })
}
