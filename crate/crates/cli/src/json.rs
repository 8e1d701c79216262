//! JSON schemas for every object the CLI reads and writes, plus the
//! conversions to and from the core types.
//!
//! Rationals travel as `["numerator", "denominator"]` decimal strings so
//! arbitrary precision survives; prime-field residues are plain integers.
//! Every document the CLI emits carries `"schema": "lieconj/1"`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use lieconj_core::cr::CRInstance;
use lieconj_core::field::{FieldSpec, Scalar};
use lieconj_core::graph::ColoredGraph;
use lieconj_core::lie::MatrixLieAlgebra;
use lieconj_core::matrix::Matrix;
use lieconj_core::problema::{
    BlockGroup, BlockGroupKind, ProblemAInstance, ProblemAWitness,
};
use lieconj_core::sympoly::DensePolynomial;

pub const SCHEMA_TAG: &str = "lieconj/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SchemaError {}

fn bad(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

// ---------------------------------------------------------------------------
// Fields and scalars

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FieldDto {
    Name(String),
    Fp { #[serde(rename = "Fp")] p: u64 },
}

impl FieldDto {
    pub fn to_field(&self) -> Result<FieldSpec, SchemaError> {
        match self {
            FieldDto::Name(s) if s == "Q" => Ok(FieldSpec::Rationals),
            FieldDto::Name(s) => Err(bad(format!("unknown field {s:?}; use \"Q\" or {{\"Fp\": p}}"))),
            FieldDto::Fp { p } => {
                FieldSpec::prime_field(*p).map_err(|e| bad(format!("bad prime field: {e}")))
            }
        }
    }

    pub fn from_field(field: FieldSpec) -> FieldDto {
        match field {
            FieldSpec::Rationals => FieldDto::Name("Q".into()),
            FieldSpec::PrimeField(p) => FieldDto::Fp { p },
        }
    }
}

/// Parse the CLI `--field` syntax `Q` or `Fp:<p>`.
pub fn parse_field_flag(s: &str) -> Result<FieldSpec, SchemaError> {
    if s == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(p) = s.strip_prefix("Fp:") {
        let p: u64 = p.parse().map_err(|_| bad("expected Fp:<prime>"))?;
        return FieldSpec::prime_field(p).map_err(|e| bad(format!("bad prime field: {e}")));
    }
    Err(bad(format!("unknown field {s:?}; use Q or Fp:<p>")))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum EntryDto {
    Int(i64),
    Ratio([String; 2]),
}

impl EntryDto {
    pub fn to_scalar(&self, field: FieldSpec) -> Result<Scalar, SchemaError> {
        match (self, field) {
            (EntryDto::Int(v), _) => Ok(field.from_i64(*v)),
            (EntryDto::Ratio([num, den]), FieldSpec::Rationals) => {
                let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
                let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
                field
                    .from_ratio(num, den)
                    .map_err(|e| bad(format!("bad rational: {e}")))
            }
            (EntryDto::Ratio(_), FieldSpec::PrimeField(_)) => {
                Err(bad("prime field entries must be integers"))
            }
        }
    }

    pub fn from_scalar(s: &Scalar) -> EntryDto {
        match s {
            Scalar::Rational(r) => {
                EntryDto::Ratio([r.numer().to_string(), r.denom().to_string()])
            }
            Scalar::Fp { value, .. } => EntryDto::Int(*value as i64),
        }
    }
}

// ---------------------------------------------------------------------------
// Matrices, codes, Lie algebras

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDto {
    pub field: FieldDto,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<EntryDto>,
}

impl MatrixDto {
    pub fn to_matrix(&self) -> Result<Matrix, SchemaError> {
        let field = self.field.to_field()?;
        if self.entries.len() != self.rows * self.cols {
            return Err(bad(format!(
                "matrix needs {} entries, got {}",
                self.rows * self.cols,
                self.entries.len()
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.to_scalar(field))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::new(self.rows, self.cols, field, entries))
    }

    pub fn from_matrix(m: &Matrix) -> MatrixDto {
        MatrixDto {
            field: FieldDto::from_field(m.field()),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(EntryDto::from_scalar).collect(),
        }
    }
}

/// Code files are matrix files, optionally tagged with `"kind": "code"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(flatten)]
    pub matrix: MatrixDto,
}

impl CodeDto {
    pub fn to_code(&self) -> Result<lieconj_core::code::Code, SchemaError> {
        if let Some(kind) = &self.kind {
            if kind != "code" {
                return Err(bad(format!("expected kind \"code\", got {kind:?}")));
            }
        }
        Ok(lieconj_core::code::Code::new(&self.matrix.to_matrix()?))
    }

    pub fn from_code(c: &lieconj_core::code::Code) -> CodeDto {
        CodeDto {
            kind: Some("code".into()),
            matrix: MatrixDto::from_matrix(c.generator()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieAlgebraDto {
    pub n: usize,
    pub field: FieldDto,
    pub basis: Vec<MatrixDto>,
}

impl LieAlgebraDto {
    pub fn to_algebra(&self) -> Result<MatrixLieAlgebra, SchemaError> {
        let field = self.field.to_field()?;
        let mats = self
            .basis
            .iter()
            .map(|m| m.to_matrix())
            .collect::<Result<Vec<_>, _>>()?;
        MatrixLieAlgebra::span(self.n, field, &mats)
            .map_err(|e| bad(format!("bad Lie algebra: {e}")))
    }

    pub fn from_algebra(l: &MatrixLieAlgebra) -> LieAlgebraDto {
        LieAlgebraDto {
            n: l.ambient_size(),
            field: FieldDto::from_field(l.field()),
            basis: l.basis().iter().map(MatrixDto::from_matrix).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Graphs

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDto {
    pub directed: bool,
    pub n: usize,
    pub vcolors: Vec<u32>,
    pub edges: Vec<(usize, usize, u32)>,
}

impl GraphDto {
    pub fn to_graph(&self) -> Result<ColoredGraph, SchemaError> {
        if self.vcolors.len() != self.n {
            return Err(bad("vcolors length must equal n"));
        }
        ColoredGraph::new(self.directed, self.vcolors.clone(), &self.edges)
            .map_err(|e| bad(format!("bad graph: {e}")))
    }

    pub fn from_graph(g: &ColoredGraph) -> GraphDto {
        GraphDto {
            directed: g.directed(),
            n: g.vertex_count(),
            vcolors: g.vertex_colors().to_vec(),
            edges: g.edges().to_vec(),
        }
    }
}

// ---------------------------------------------------------------------------
// Block-structured instances

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockGroupDto {
    pub kind: String,
    pub alphabet: Vec<u32>,
    /// Each element is a table from alphabet value (as a decimal string,
    /// JSON keys are strings) to its image.
    pub elements: Vec<BTreeMap<String, u32>>,
}

impl BlockGroupDto {
    pub fn to_group(&self) -> Result<BlockGroup, SchemaError> {
        let kind = match self.kind.as_str() {
            "Trivial" => BlockGroupKind::Trivial,
            "S2" => BlockGroupKind::S2,
            "S3" => BlockGroupKind::S3,
            other => return Err(bad(format!("unknown group kind {other:?}"))),
        };
        let mut elements = Vec::with_capacity(self.elements.len());
        for table in &self.elements {
            let mut perm = Vec::with_capacity(self.alphabet.len());
            for &v in &self.alphabet {
                let image = table
                    .get(&v.to_string())
                    .ok_or_else(|| bad(format!("element table missing value {v}")))?;
                let idx = self
                    .alphabet
                    .iter()
                    .position(|&a| a == *image)
                    .ok_or_else(|| bad(format!("element image {image} outside the alphabet")))?;
                perm.push(idx);
            }
            elements.push(perm);
        }
        BlockGroup::new(kind, self.alphabet.clone(), elements)
            .map_err(|e| bad(format!("bad group: {e}")))
    }

    pub fn from_group(g: &BlockGroup) -> BlockGroupDto {
        let kind = match g.kind() {
            BlockGroupKind::Trivial => "Trivial",
            BlockGroupKind::S2 => "S2",
            BlockGroupKind::S3 => "S3",
        };
        let elements = g
            .elements()
            .iter()
            .map(|perm| {
                perm.iter()
                    .enumerate()
                    .map(|(i, &img)| (g.alphabet()[i].to_string(), g.alphabet()[img]))
                    .collect()
            })
            .collect();
        BlockGroupDto {
            kind: kind.into(),
            alphabet: g.alphabet().to_vec(),
            elements,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemADto {
    #[serde(rename = "M")]
    pub matrix: Vec<Vec<u32>>,
    pub blocks: Vec<usize>,
    pub groups: Vec<BlockGroupDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row_colors: Option<Vec<u32>>,
}

impl ProblemADto {
    pub fn to_instance(&self) -> Result<ProblemAInstance, SchemaError> {
        let groups = self
            .groups
            .iter()
            .map(|g| g.to_group())
            .collect::<Result<Vec<_>, _>>()?;
        ProblemAInstance::new(
            self.matrix.clone(),
            self.blocks.clone(),
            groups,
            self.row_colors.clone(),
        )
        .map_err(|e| bad(format!("bad instance: {e}")))
    }

    pub fn from_instance(i: &ProblemAInstance) -> ProblemADto {
        ProblemADto {
            matrix: i.matrix().to_vec(),
            blocks: i.block_sizes().to_vec(),
            groups: i.groups().iter().map(BlockGroupDto::from_group).collect(),
            row_colors: i.row_colors().map(<[u32]>::to_vec),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrDto {
    pub weights: MatrixDto,
    pub pa: ProblemADto,
}

impl CrDto {
    pub fn to_instance(&self) -> Result<CRInstance, SchemaError> {
        CRInstance::new(self.weights.to_matrix()?, self.pa.to_instance()?)
            .map_err(|e| bad(format!("bad instance: {e}")))
    }

    pub fn from_instance(i: &CRInstance) -> CrDto {
        CrDto {
            weights: MatrixDto::from_matrix(&i.weights),
            pa: ProblemADto::from_instance(&i.pa),
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomials

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDto {
    pub exp: Vec<u32>,
    pub coef: EntryDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialDto {
    pub m: usize,
    pub field: FieldDto,
    pub terms: Vec<TermDto>,
}

impl PolynomialDto {
    pub fn to_polynomial(&self) -> Result<DensePolynomial, SchemaError> {
        let field = self.field.to_field()?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), t.coef.to_scalar(field)?)))
            .collect::<Result<Vec<_>, SchemaError>>()?;
        DensePolynomial::new(self.m, field, terms).map_err(|e| bad(format!("bad polynomial: {e}")))
    }

    pub fn from_polynomial(p: &DensePolynomial) -> PolynomialDto {
        PolynomialDto {
            m: p.num_vars(),
            field: FieldDto::from_field(p.field()),
            terms: p
                .terms()
                .map(|(exp, coef)| TermDto {
                    exp: exp.clone(),
                    coef: EntryDto::from_scalar(coef),
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Witnesses

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemAWitnessDto {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    /// Per column of the first instance: the chosen group element as a
    /// value table (same shape as group elements).
    pub col_elements: Vec<BTreeMap<String, u32>>,
}

impl ProblemAWitnessDto {
    pub fn from_witness(i1: &ProblemAInstance, w: &ProblemAWitness) -> ProblemAWitnessDto {
        let col_elements = (0..i1.cols())
            .map(|j| {
                let g = i1.group_of_col(j);
                g.alphabet()
                    .iter()
                    .map(|&v| (v.to_string(), g.apply(w.col_elements[j], v)))
                    .collect()
            })
            .collect();
        ProblemAWitnessDto {
            row_perm: w.row_perm.clone(),
            col_perm: w.col_perm.clone(),
            col_elements,
        }
    }

    pub fn to_witness(&self, i1: &ProblemAInstance) -> Result<ProblemAWitness, SchemaError> {
        if self.col_elements.len() != i1.cols() {
            return Err(bad("one element table per column is required"));
        }
        let mut col_elements = Vec::with_capacity(i1.cols());
        for (j, table) in self.col_elements.iter().enumerate() {
            let g = i1.group_of_col(j);
            for &v in g.alphabet() {
                if !table.contains_key(&v.to_string()) {
                    return Err(bad(format!("column {j}: table missing value {v}")));
                }
            }
            let lookup = |v: u32| -> u32 { table[&v.to_string()] };
            let idx = g
                .element_matching(&lookup)
                .ok_or_else(|| bad(format!("column {j}: table is not a group element")))?;
            col_elements.push(idx);
        }
        Ok(ProblemAWitness {
            row_perm: self.row_perm.clone(),
            col_perm: self.col_perm.clone(),
            col_elements,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrWitnessDto {
    pub pa: ProblemAWitnessDto,
    pub abelian_change: MatrixDto,
}

// ---------------------------------------------------------------------------
// Top-level output documents

#[derive(Debug, Clone, Serialize)]
pub struct DecisionDoc {
    pub schema: &'static str,
    pub status: &'static str,
    pub witness: Option<serde_json::Value>,
    pub diagnostics: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorDoc {
    pub schema: &'static str,
    pub status: &'static str,
    pub error: ErrorBody,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

pub fn error_doc(kind: &str, message: impl Into<String>) -> ErrorDoc {
    ErrorDoc {
        schema: SCHEMA_TAG,
        status: "error",
        error: ErrorBody {
            kind: kind.into(),
            message: message.into(),
        },
    }
}
