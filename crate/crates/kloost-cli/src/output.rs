//! Output schemas: JSON for exact objects (decimal-string coefficients,
//! arbitrary-precision safe), CSV for floating values and statistics.
//! Iteration order is always a = g^0, g^1, …, so identical run
//! configurations produce byte-identical files.

use serde::Serialize;

use kloost::classify::{ClassExclusion, GroupDescriptor};
use kloost::cyclo::{CycloInt, ReductionCtx};
use kloost::field::{FieldCtx, FqElem};
use kloost::kloosterman::{KlTable, SatoTateReport};
use kloost::matgroup::{MatCyclo, MatFin};

#[derive(Serialize)]
pub struct ExactTableFile {
    pub p: u64,
    pub k: u32,
    pub n: u32,
    pub conductor: u64,
    pub values: Vec<ExactValue>,
}

#[derive(Serialize)]
pub struct ExactValue {
    pub a_dlog: u64,
    /// Coefficients over the ζ_p power basis, constant first, as decimal
    /// strings.
    pub coeffs: Vec<String>,
}

pub fn exact_table_file(table: &KlTable) -> ExactTableFile {
    ExactTableFile {
        p: table.p(),
        k: table.k(),
        n: table.rank(),
        conductor: table.p(),
        values: (0..table.len())
            .map(|j| ExactValue {
                a_dlog: j as u64,
                coeffs: table.row(j).iter().map(|c| c.to_string()).collect(),
            })
            .collect(),
    }
}

pub fn cyclo_coeff_strings(x: &CycloInt) -> Vec<String> {
    x.coeffs().iter().map(|c| c.to_string()).collect()
}

/// CSV with columns a_dlog, re, im, abs; one file per embedding.
pub fn float_table_csv(values: &[num_complex::Complex64]) -> String {
    let mut out = String::from("a_dlog,re,im,abs\n");
    for (j, v) in values.iter().enumerate() {
        out.push_str(&format!("{j},{:e},{:e},{:e}\n", v.re, v.im, v.norm()));
    }
    out
}

#[derive(Serialize)]
pub struct ReducedTableFile {
    pub p: u64,
    pub k: u32,
    pub n: u32,
    pub ell: u64,
    pub conductor: u64,
    pub residue_degree: u32,
    /// The chosen irreducible factor of Φ_m mod ℓ, constant first.
    pub factor: Vec<u64>,
    /// Encoding of the image of ζ_m in F_λ.
    pub root: u64,
    pub sqrt_sign: String,
    pub values: Vec<ReducedValue>,
}

#[derive(Serialize)]
pub struct ReducedValue {
    pub a_dlog: u64,
    /// Coefficients of the residue-field element, constant first.
    pub coeffs: Vec<u64>,
}

pub fn reduced_table_file(
    table: &KlTable,
    rc: &ReductionCtx,
    sign: &str,
    values: &[FqElem],
) -> ReducedTableFile {
    ReducedTableFile {
        p: table.p(),
        k: table.k(),
        n: table.rank(),
        ell: rc.ell(),
        conductor: rc.conductor(),
        residue_degree: rc.residue_degree(),
        factor: rc.factor().to_vec(),
        root: rc.root().0,
        sqrt_sign: sign.to_string(),
        values: values
            .iter()
            .enumerate()
            .map(|(j, v)| ReducedValue {
                a_dlog: j as u64,
                coeffs: rc.field().decode(*v),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u64>,
}

pub fn field_descriptor(ctx: &FieldCtx) -> FieldDescriptor {
    FieldDescriptor {
        p: ctx.p(),
        k: ctx.k(),
        modulus: ctx.modulus().to_vec(),
    }
}

/// Matrices over a finite field: arrays of arrays of integer encodings,
/// plus the field descriptor.
#[derive(Serialize)]
pub struct MatrixFile {
    pub field: FieldDescriptor,
    pub entries: Vec<Vec<u64>>,
}

pub fn matrix_file(ctx: &FieldCtx, m: &MatFin) -> MatrixFile {
    let n = m.dim();
    MatrixFile {
        field: field_descriptor(ctx),
        entries: (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].0).collect())
            .collect(),
    }
}

/// Matrices over `Z[ζ_p]`: entries as decimal-string coefficient vectors.
#[derive(Serialize)]
pub struct CycloMatrixFile {
    pub conductor: u64,
    pub entries: Vec<Vec<Vec<String>>>,
}

pub fn cyclo_matrix_file(conductor: u64, m: &MatCyclo) -> CycloMatrixFile {
    let n = m.dim();
    CycloMatrixFile {
        conductor,
        entries: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| cyclo_coeff_strings(m.entry(i, j)))
                    .collect()
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct CandidateRecord {
    pub family: String,
    pub l: u32,
    pub a: u32,
    pub m_s: u64,
    pub out_order: Option<u64>,
}

pub fn candidate_record(d: &GroupDescriptor) -> CandidateRecord {
    CandidateRecord {
        family: d.family.as_str().to_string(),
        l: d.l,
        a: d.a,
        m_s: kloost::classify::m_lower(d).expect("survey output is in range"),
        out_order: kloost::classify::out_order(d).ok(),
    }
}

#[derive(Serialize)]
pub struct ExclusionRecord {
    pub class: String,
    pub applicable: bool,
    pub excluded: bool,
    pub bound: Option<String>,
    pub detail: String,
}

pub fn exclusion_record(c: &ClassExclusion) -> ExclusionRecord {
    ExclusionRecord {
        class: c.class.to_string(),
        applicable: c.applicable,
        excluded: c.excluded,
        bound: c.bound.as_ref().map(|b| b.to_string()),
        detail: c.detail.clone(),
    }
}

/// CSV with columns p, m_1…m_{2K}, ks.
pub fn sato_tate_csv(reports: &[SatoTateReport]) -> String {
    let k2 = reports.first().map_or(0, |r| r.moments.len());
    let mut out = String::from("p");
    for j in 1..=k2 {
        out.push_str(&format!(",m{j}"));
    }
    out.push_str(",ks\n");
    for r in reports {
        out.push_str(&r.p.to_string());
        for m in &r.moments {
            out.push_str(&format!(",{:e}", m));
        }
        out.push_str(&format!(",{:e}\n", r.ks));
    }
    out
}
