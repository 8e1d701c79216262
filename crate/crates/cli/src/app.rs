//! Command-line front end: one subcommand per solver and reduction, JSON in,
//! one JSON document out, exit code 0 for "equivalent" (or plain success),
//! 1 for "not equivalent", 2 for errors.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use lieconj_core::abelian::{abelian_conjugate, verify_conjugacy, AbelianError};
use lieconj_core::code::{code_equivalent, verify_code_witness, CodeError, ResidualStrategy};
use lieconj_core::cr::{cr_equivalent, verify_cr_witness, CRWitness, CrError};
use lieconj_core::eigen::DiagonalizeError;
use lieconj_core::graph::{find_isomorphism_with_stats, is_isomorphism};
use lieconj_core::perms::{factorial, BlockPermutations};
use lieconj_core::problema::{
    gi_to_problem_a, problem_a_to_gi, solve_boundedrows, solve_bruteforce, solve_via_gi,
    verify_witness, Budget, ProblemAError, ProblemAInstance,
};
use lieconj_core::sympoly::symmetry_lie_algebra;

use crate::gen::Gen;
use crate::json::*;

#[derive(Debug)]
pub struct AppError {
    pub kind: &'static str,
    pub message: String,
}

impl AppError {
    fn new(kind: &'static str, message: impl Into<String>) -> AppError {
        AppError {
            kind,
            message: message.into(),
        }
    }
}

impl From<SchemaError> for AppError {
    fn from(e: SchemaError) -> Self {
        AppError::new("schema", e.0)
    }
}

impl From<AbelianError> for AppError {
    fn from(e: AbelianError) -> Self {
        let kind = match &e {
            AbelianError::NotAbelian => "not_abelian",
            AbelianError::InputMismatch => "input_mismatch",
            AbelianError::Diagonalize(DiagonalizeError::NotDiagonalizableOverField) => {
                "not_diagonalizable_over_field"
            }
            AbelianError::Diagonalize(_) => "diagonalize",
            AbelianError::Lie(_) => "lie",
        };
        AppError::new(kind, e.to_string())
    }
}

impl From<CodeError> for AppError {
    fn from(e: CodeError) -> Self {
        AppError::new("field_mismatch", e.to_string())
    }
}

impl From<ProblemAError> for AppError {
    fn from(e: ProblemAError) -> Self {
        let kind = match &e {
            ProblemAError::BudgetExceeded => "budget_exceeded",
            ProblemAError::UnsupportedGroup => "unsupported_group",
            _ => "problem_a",
        };
        AppError::new(kind, e.to_string())
    }
}

impl From<CrError> for AppError {
    fn from(e: CrError) -> Self {
        match e {
            CrError::ProblemA(inner) => inner.into(),
            CrError::InputMismatch => AppError::new("input_mismatch", e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "lieconj",
    version,
    about = "Exact solvers for matrix Lie algebra conjugacy, code equivalence, \
             block-structured matrix equivalence, and graph isomorphism"
)]
struct Cli {
    /// Reserved for parallel enumeration; solvers currently run
    /// single-threaded and output never depends on this flag.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum SolverChoice {
    #[default]
    Auto,
    Bruteforce,
    BoundedRows,
    Gi,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conjugacy of abelian diagonalizable matrix Lie algebras.
    LacAbelian {
        a: PathBuf,
        b: PathBuf,
        /// Verify a previously emitted witness instead of solving.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Equivalence of completely reducible instances (weights + label data).
    CrLac {
        i1: PathBuf,
        i2: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Permutation equivalence of linear codes.
    CodeEquiv {
        c1: PathBuf,
        c2: PathBuf,
        /// Cross-validate residual matchings through the graph solver.
        #[arg(long)]
        residual_via_gi: bool,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Block-structured integer matrix equivalence.
    ProblemA {
        i1: PathBuf,
        i2: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        solver: SolverChoice,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Colored (di)graph isomorphism.
    GraphIso {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Lie algebra of the symmetry group of a dense polynomial.
    SymLie { f: PathBuf },
    /// Structural report on a matrix Lie algebra.
    LieInfo { l: PathBuf },
    /// Emit the output of a reduction.
    Reduce {
        #[command(subcommand)]
        what: ReduceCommand,
    },
    /// Deterministic planted-instance generator.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Subcommand, Debug)]
enum ReduceCommand {
    /// Graph to linear code (three identity blocks plus incidence columns).
    GiToCode {
        g: PathBuf,
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Graph to a block-structured instance (edge-vertex incidence).
    GiToPa { g: PathBuf },
    /// Block-structured instance to its palette-gadget graph.
    PaToGi { i: PathBuf },
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Pair of abelian diagonalizable Lie algebras.
    Abelian {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "Q")]
        field: String,
        /// Perturb one diagonal entry instead of planting an equivalence.
        #[arg(long)]
        perturbed: bool,
    },
    /// Pair of linear codes.
    Code {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        perturbed: bool,
    },
    /// Pair of simple undirected graphs.
    Graph {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        edges: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        perturbed: bool,
    },
    /// Pair of block-structured instances.
    ProblemA {
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        perturbed: bool,
    },
    /// Pair of completely reducible instances.
    Cr {
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 2)]
        abelian_dim: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        perturbed: bool,
    },
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::new("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| AppError::new("schema", format!("{}: {e}", path.display())))
}

/// Accept either a bare witness object or a whole output document with a
/// `witness` field.
fn witness_value(path: &Path) -> Result<Value, AppError> {
    let value: Value = load(path)?;
    match value.get("witness") {
        Some(Value::Null) => Err(AppError::new(
            "witness_verification_failed",
            "document has no witness to check",
        )),
        Some(w) => Ok(w.clone()),
        None => Ok(value),
    }
}

fn decision(witness: Option<Value>, diagnostics: Value) -> (Value, i32) {
    let status = if witness.is_some() {
        "equivalent"
    } else {
        "not_equivalent"
    };
    let code = if witness.is_some() { 0 } else { 1 };
    let doc = DecisionDoc {
        schema: SCHEMA_TAG,
        status,
        witness,
        diagnostics,
    };
    (serde_json::to_value(doc).expect("serializable"), code)
}

fn verified(witness: Value) -> (Value, i32) {
    decision(Some(witness), json!({"checked": true}))
}

fn check_failure() -> AppError {
    AppError::new(
        "witness_verification_failed",
        "witness does not verify against the inputs",
    )
}

fn dispatch(cli: Cli) -> Result<(Value, i32), AppError> {
    match cli.command {
        Command::LacAbelian { a, b, check } => {
            let l1 = load::<LieAlgebraDto>(&a)?.to_algebra()?;
            let l2 = load::<LieAlgebraDto>(&b)?.to_algebra()?;
            if let Some(path) = check {
                let w: MatrixDto = serde_json::from_value(witness_value(&path)?)
                    .map_err(|e| AppError::new("schema", e.to_string()))?;
                let g = w.to_matrix()?;
                return if verify_conjugacy(&l1, &l2, &g)
                    .map_err(|e| AppError::new("lie", e.to_string()))?
                {
                    Ok(verified(serde_json::to_value(MatrixDto::from_matrix(&g)).unwrap()))
                } else {
                    Err(check_failure())
                };
            }
            let out = abelian_conjugate(&l1, &l2)?;
            let diagnostics = json!({
                "information_sets_tried": out.stats.code_stats.subsets_tried,
                "residual_checks": out.stats.code_stats.residual_checks,
            });
            let witness = out
                .witness
                .map(|w| serde_json::to_value(MatrixDto::from_matrix(&w.g)).unwrap());
            Ok(decision(witness, diagnostics))
        }
        Command::CrLac {
            i1,
            i2,
            budget,
            check,
        } => {
            let a = load::<CrDto>(&i1)?.to_instance()?;
            let b = load::<CrDto>(&i2)?.to_instance()?;
            if let Some(path) = check {
                let dto: CrWitnessDto = serde_json::from_value(witness_value(&path)?)
                    .map_err(|e| AppError::new("schema", e.to_string()))?;
                let witness = CRWitness {
                    pa_witness: dto.pa.to_witness(&a.pa)?,
                    abelian_change: dto.abelian_change.to_matrix()?,
                };
                return if verify_cr_witness(&a, &b, &witness) {
                    Ok(verified(serde_json::to_value(&dto).unwrap()))
                } else {
                    Err(check_failure())
                };
            }
            let out = cr_equivalent(&a, &b, Budget { max_combinations: budget })?;
            let diagnostics = json!({
                "candidates": out.stats.candidates,
                "pa_combinations": out.stats.pa_combinations,
            });
            let witness = out.witness.map(|w| {
                serde_json::to_value(CrWitnessDto {
                    pa: ProblemAWitnessDto::from_witness(&a.pa, &w.pa_witness),
                    abelian_change: MatrixDto::from_matrix(&w.abelian_change),
                })
                .unwrap()
            });
            Ok(decision(witness, diagnostics))
        }
        Command::CodeEquiv {
            c1,
            c2,
            residual_via_gi,
            check,
        } => {
            let a = load::<CodeDto>(&c1)?.to_code()?;
            let b = load::<CodeDto>(&c2)?.to_code()?;
            if let Some(path) = check {
                #[derive(serde::Deserialize)]
                struct W {
                    permutation: Vec<usize>,
                }
                let w: W = serde_json::from_value(witness_value(&path)?)
                    .map_err(|e| AppError::new("schema", e.to_string()))?;
                return if verify_code_witness(&a, &b, &w.permutation) {
                    Ok(verified(json!({"permutation": w.permutation})))
                } else {
                    Err(check_failure())
                };
            }
            let strategy = if residual_via_gi {
                ResidualStrategy::ViaGraphIso
            } else {
                ResidualStrategy::Enumerate
            };
            let out = code_equivalent(&a, &b, strategy)?;
            let diagnostics = json!({
                "information_sets_tried": out.stats.subsets_tried,
                "residual_checks": out.stats.residual_checks,
            });
            let witness = out.witness.map(|w| json!({"permutation": w.permutation}));
            Ok(decision(witness, diagnostics))
        }
        Command::ProblemA {
            i1,
            i2,
            solver,
            budget,
            check,
        } => {
            let a = load::<ProblemADto>(&i1)?.to_instance()?;
            let b = load::<ProblemADto>(&i2)?.to_instance()?;
            if let Some(path) = check {
                let dto: ProblemAWitnessDto = serde_json::from_value(witness_value(&path)?)
                    .map_err(|e| AppError::new("schema", e.to_string()))?;
                let w = dto.to_witness(&a)?;
                return if verify_witness(&a, &b, &w) {
                    Ok(verified(serde_json::to_value(&dto).unwrap()))
                } else {
                    Err(check_failure())
                };
            }
            let budget = Budget { max_combinations: budget };
            let (witness, diagnostics) = run_problem_a(&a, &b, solver, budget)?;
            let witness =
                witness.map(|w| serde_json::to_value(ProblemAWitnessDto::from_witness(&a, &w)).unwrap());
            Ok(decision(witness, diagnostics))
        }
        Command::GraphIso { g1, g2, check } => {
            let a = load::<GraphDto>(&g1)?.to_graph()?;
            let b = load::<GraphDto>(&g2)?.to_graph()?;
            if let Some(path) = check {
                #[derive(serde::Deserialize)]
                struct W {
                    mapping: Vec<usize>,
                }
                let w: W = serde_json::from_value(witness_value(&path)?)
                    .map_err(|e| AppError::new("schema", e.to_string()))?;
                return if is_isomorphism(&a, &b, &w.mapping) {
                    Ok(verified(json!({"mapping": w.mapping})))
                } else {
                    Err(check_failure())
                };
            }
            let out = find_isomorphism_with_stats(&a, &b);
            let diagnostics = json!({"search_nodes": out.nodes});
            let witness = out.witness.map(|w| json!({"mapping": w.mapping}));
            Ok(decision(witness, diagnostics))
        }
        Command::SymLie { f } => {
            let poly = load::<PolynomialDto>(&f)?.to_polynomial()?;
            let algebra =
                symmetry_lie_algebra(&poly).map_err(|e| AppError::new("sympoly", e.to_string()))?;
            let doc = json!({
                "schema": SCHEMA_TAG,
                "dimension": algebra.dim(),
                "n": algebra.ambient_size(),
                "closed": algebra.is_closed(),
                "basis": algebra.basis().iter().map(MatrixDto::from_matrix).collect::<Vec<_>>(),
            });
            Ok((doc, 0))
        }
        Command::LieInfo { l } => {
            let algebra = load::<LieAlgebraDto>(&l)?.to_algebra()?;
            let derived: Vec<usize> = algebra.derived_series().iter().map(|t| t.dim()).collect();
            let lower: Vec<usize> = algebra
                .lower_central_series()
                .iter()
                .map(|t| t.dim())
                .collect();
            let doc = json!({
                "schema": SCHEMA_TAG,
                "n": algebra.ambient_size(),
                "field": FieldDto::from_field(algebra.field()),
                "dim": algebra.dim(),
                "closed": algebra.is_closed(),
                "abelian": algebra.is_abelian(),
                "solvable": algebra.is_solvable(),
                "nilpotent": algebra.is_nilpotent(),
                "derived_series_dims": derived,
                "lower_central_series_dims": lower,
            });
            Ok((doc, 0))
        }
        Command::Reduce { what } => reduce(what),
        Command::Gen { what } => generate(what),
    }
}

fn run_problem_a(
    a: &ProblemAInstance,
    b: &ProblemAInstance,
    solver: SolverChoice,
    budget: Budget,
) -> Result<(Option<lieconj_core::problema::ProblemAWitness>, Value), AppError> {
    let twist: u128 = (0..a.cols())
        .map(|j| a.group_of_col(j).order() as u128)
        .product();
    let cost_bruteforce = BlockPermutations::count(a.block_sizes()).saturating_mul(twist);
    let cost_boundedrows = factorial(a.rows()).saturating_mul(twist);
    let choice = match solver {
        SolverChoice::Auto => {
            if cost_bruteforce.min(cost_boundedrows) > budget.max_combinations {
                SolverChoice::Gi
            } else if cost_boundedrows < cost_bruteforce {
                SolverChoice::BoundedRows
            } else {
                SolverChoice::Bruteforce
            }
        }
        other => other,
    };
    match choice {
        SolverChoice::Bruteforce => {
            let out = solve_bruteforce(a, b, budget)?;
            Ok((
                out.witness,
                json!({"solver": "bruteforce", "combinations_tried": out.stats.combinations_tried}),
            ))
        }
        SolverChoice::BoundedRows => {
            let out = solve_boundedrows(a, b, budget)?;
            Ok((
                out.witness,
                json!({"solver": "bounded-rows", "combinations_tried": out.stats.combinations_tried}),
            ))
        }
        SolverChoice::Gi | SolverChoice::Auto => {
            let out = solve_via_gi(a, b)?;
            Ok((
                out.witness,
                json!({"solver": "gi", "search_nodes": out.search_nodes}),
            ))
        }
    }
}

fn reduce(what: ReduceCommand) -> Result<(Value, i32), AppError> {
    match what {
        ReduceCommand::GiToCode { g, field } => {
            let graph = load::<GraphDto>(&g)?.to_graph()?;
            let field = parse_field_flag(&field)?;
            let code = lieconj_core::code::gi_to_code(&graph, field)
                .map_err(|e| AppError::new("reduce", e.to_string()))?;
            let mut doc = serde_json::to_value(CodeDto::from_code(&code)).unwrap();
            doc["schema"] = json!(SCHEMA_TAG);
            Ok((doc, 0))
        }
        ReduceCommand::GiToPa { g } => {
            let graph = load::<GraphDto>(&g)?.to_graph()?;
            let inst = gi_to_problem_a(&graph)?;
            let mut doc = serde_json::to_value(ProblemADto::from_instance(&inst)).unwrap();
            doc["schema"] = json!(SCHEMA_TAG);
            Ok((doc, 0))
        }
        ReduceCommand::PaToGi { i } => {
            let inst = load::<ProblemADto>(&i)?.to_instance()?;
            let enc = problem_a_to_gi(&inst)?;
            let mut doc = serde_json::to_value(GraphDto::from_graph(&enc.graph)).unwrap();
            doc["schema"] = json!(SCHEMA_TAG);
            Ok((doc, 0))
        }
    }
}

fn pair_doc(kind: &str, seed: u64, planted: bool, first: Value, second: Value) -> (Value, i32) {
    (
        json!({
            "schema": SCHEMA_TAG,
            "kind": kind,
            "seed": seed,
            "planted": planted,
            "first": first,
            "second": second,
        }),
        0,
    )
}

fn generate(what: GenCommand) -> Result<(Value, i32), AppError> {
    match what {
        GenCommand::Abelian {
            n,
            d,
            seed,
            field,
            perturbed,
        } => {
            let field = parse_field_flag(&field)?;
            let mut gen = Gen::new(seed);
            let (l1, l2) = if perturbed {
                gen.abelian_perturbed_pair(n, d, field)
            } else {
                gen.abelian_pair(n, d, field)
            };
            Ok(pair_doc(
                "abelian",
                seed,
                !perturbed,
                serde_json::to_value(LieAlgebraDto::from_algebra(&l1)).unwrap(),
                serde_json::to_value(LieAlgebraDto::from_algebra(&l2)).unwrap(),
            ))
        }
        GenCommand::Code {
            n,
            d,
            seed,
            field,
            perturbed,
        } => {
            let field = parse_field_flag(&field)?;
            let mut gen = Gen::new(seed);
            let (c1, c2) = if perturbed {
                (gen.code(n, d, field), gen.code(n, d, field))
            } else {
                gen.code_pair(n, d, field)
            };
            Ok(pair_doc(
                "code",
                seed,
                !perturbed,
                serde_json::to_value(CodeDto::from_code(&c1)).unwrap(),
                serde_json::to_value(CodeDto::from_code(&c2)).unwrap(),
            ))
        }
        GenCommand::Graph {
            n,
            edges,
            seed,
            perturbed,
        } => {
            let mut gen = Gen::new(seed);
            let g1 = gen.graph(n, edges);
            let g2 = if perturbed {
                gen.graph(n, edges)
            } else {
                gen.relabeled(&g1)
            };
            Ok(pair_doc(
                "graph",
                seed,
                !perturbed,
                serde_json::to_value(GraphDto::from_graph(&g1)).unwrap(),
                serde_json::to_value(GraphDto::from_graph(&g2)).unwrap(),
            ))
        }
        GenCommand::ProblemA {
            rows,
            cols,
            seed,
            perturbed,
        } => {
            let mut gen = Gen::new(seed);
            let i1 = gen.random_problem_a(rows, cols);
            let i2 = if perturbed {
                gen.perturb_problem_a(&i1)
            } else {
                gen.transform_problem_a(&i1)
            };
            Ok(pair_doc(
                "problem-a",
                seed,
                !perturbed,
                serde_json::to_value(ProblemADto::from_instance(&i1)).unwrap(),
                serde_json::to_value(ProblemADto::from_instance(&i2)).unwrap(),
            ))
        }
        GenCommand::Cr {
            rows,
            abelian_dim,
            cols,
            seed,
            field,
            perturbed,
        } => {
            let field = parse_field_flag(&field)?;
            let mut gen = Gen::new(seed);
            let i1 = gen.cr_instance(rows, abelian_dim, cols, field);
            let i2 = if perturbed {
                let mut other = gen.transform_cr(&i1);
                let r = gen.index(other.rows());
                if other.abelian_dim() > 0 {
                    let c = gen.index(other.abelian_dim());
                    let bump = field.from_i64(1);
                    let cur = other.weights.at(r, c) + &bump;
                    *other.weights.at_mut(r, c) = cur;
                }
                other
            } else {
                gen.transform_cr(&i1)
            };
            Ok(pair_doc(
                "cr",
                seed,
                !perturbed,
                serde_json::to_value(CrDto::from_instance(&i1)).unwrap(),
                serde_json::to_value(CrDto::from_instance(&i2)).unwrap(),
            ))
        }
    }
}

/// Parse arguments, run, print exactly one JSON document, return the exit
/// code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let doc = error_doc("usage", e.to_string());
            println!("{}", serde_json::to_string(&doc).expect("serializable"));
            return 2;
        }
    };
    match dispatch(cli) {
        Ok((doc, code)) => {
            println!("{}", serde_json::to_string(&doc).expect("serializable"));
            code
        }
        Err(e) => {
            let doc = error_doc(e.kind, e.message);
            println!("{}", serde_json::to_string(&doc).expect("serializable"));
            2
        }
    }
}
