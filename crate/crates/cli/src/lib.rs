//! Command dispatch and report assembly for the `qls` binary: TOML
//! presentations in, deterministic JSON reports out.
//!
//! Exit codes: 0 pass, 1 fail/inequivalent, 2 undecided at bound,
//! 3 input error.

use clap::{Args, Parser, Subcommand};
use qlspace_core::linalg;
use qlspace_core::presentation::Presentation;
use qlspace_core::quadruple::{self, Equivalence};
use qlspace_core::rform::{CqtMode, RForm};
use qlspace_core::{double, hopf, rform, symcenter};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qls",
    version,
    about = "Exact invariants of pointed braided tensor categories from quantum linear space data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Presentation file (TOML).
    #[arg(long)]
    pub input: PathBuf,
    /// Bound on |Γ| for isomorphism searches.
    #[arg(long, default_value_t = 64)]
    pub bound_group: u64,
    /// Bound on dim H for exhaustive verification (default 1024 for the
    /// Hopf axioms, 256 for co-quasitriangularity and brute-force oracles).
    #[arg(long)]
    pub bound_dim: Option<u64>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Seed recorded in the report (reserved for randomized searches; the
    /// shipped decision procedures are deterministic).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CqtArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Verification mode for the first axiom: `full` or `h1`.
    #[arg(long, default_value = "full")]
    pub mode: String,
}

#[derive(Args, Debug)]
pub struct EquivArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Second presentation file to compare against.
    #[arg(long)]
    pub other: PathBuf,
}

#[derive(Args, Debug)]
pub struct DoubleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Write the double's presentation (TOML) to this path.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the Hopf algebra axioms of the bosonization exhaustively.
    #[command(name = "verify-hopf")]
    VerifyHopf(CommonArgs),
    /// Build the r-form from (r0, r1) and report its normalization data.
    #[command(name = "build-rform")]
    BuildRform(CommonArgs),
    /// Verify the co-quasitriangularity axioms of the built r-form.
    #[command(name = "verify-cqt")]
    VerifyCqt(CqtArgs),
    /// Braiding matrices on V ⊗ V and squared braidings on extensions.
    #[command(name = "braid")]
    Braid(CommonArgs),
    /// Enumerate ribbon structures.
    #[command(name = "ribbon")]
    Ribbon(CommonArgs),
    /// Compute the symmetric center and its predicates.
    #[command(name = "sym-center")]
    SymCenter(CommonArgs),
    /// Normalize the presentation to its metric quadruple.
    #[command(name = "normalize")]
    Normalize(CommonArgs),
    /// Decide equivalence of two presentations' metric quadruples.
    #[command(name = "equiv")]
    Equiv(EquivArgs),
    /// Basis of the 2-cocycle space with trivial group restriction.
    #[command(name = "cocycles")]
    Cocycles(CommonArgs),
    /// Second invariant cohomology data.
    #[command(name = "h2inv")]
    H2Inv(CommonArgs),
    /// Braided autoequivalence data of the metric quadruple.
    #[command(name = "autbr")]
    AutBr(CommonArgs),
    /// Drinfeld double of a self-dual datum.
    #[command(name = "double")]
    Double(DoubleArgs),
    /// Run the full pipeline and aggregate all reports.
    #[command(name = "report-all")]
    ReportAll(CommonArgs),
}

#[derive(Serialize)]
struct Report {
    command: String,
    input: String,
    name: String,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    payload: Value,
    version: String,
}

struct Outcome {
    status: String,
    payload: Value,
    exit: i32,
}

fn pass(payload: Value) -> Outcome {
    Outcome {
        status: "pass".into(),
        payload,
        exit: EXIT_PASS,
    }
}

fn fail(payload: Value) -> Outcome {
    Outcome {
        status: "fail".into(),
        payload,
        exit: EXIT_FAIL,
    }
}

fn input_error(message: String) -> Outcome {
    Outcome {
        status: "input-error".into(),
        payload: json!({ "error": message }),
        exit: EXIT_INPUT,
    }
}

fn matrix_strings(m: &linalg::Matrix) -> Value {
    Value::Array(
        m.iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|s| Value::String(s.to_expression()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn load(args: &CommonArgs) -> Result<Presentation, Outcome> {
    Presentation::parse_file(&args.input).map_err(|e| input_error(e.to_string()))
}

fn build_rform_for(p: &Presentation) -> Result<RForm, Outcome> {
    RForm::build(&p.datum, &p.r1).map_err(|e| input_error(e.to_string()))
}

fn hopf_outcome(p: &Presentation, bound: u64) -> Outcome {
    match hopf::verify_hopf_axioms(&p.datum, bound) {
        Ok(report) => {
            let all = report.all_pass();
            let payload = json!({
                "dim": report.dim,
                "expected_dim": p.datum.dim_hopf(),
                "axioms": report.axioms,
            });
            if all {
                pass(payload)
            } else {
                fail(payload)
            }
        }
        Err(e) => input_error(e.to_string()),
    }
}

fn cqt_outcome(p: &Presentation, mode: CqtMode, bound: u64) -> Outcome {
    let rf = match build_rform_for(p) {
        Ok(rf) => rf,
        Err(o) => return o,
    };
    match rf.verify_cqt(mode, bound) {
        Ok(report) => {
            let payload = serde_json::to_value(&report).unwrap();
            if report.all_pass() {
                pass(payload)
            } else {
                fail(payload)
            }
        }
        Err(rform::RformError::DimBound { dim, bound }) => Outcome {
            status: "undecided".into(),
            payload: json!({ "reason": format!("dim H = {dim} exceeds bound {bound}") }),
            exit: EXIT_UNDECIDED,
        },
        Err(e) => input_error(e.to_string()),
    }
}

fn ribbon_outcome(p: &Presentation) -> Outcome {
    let rf = match build_rform_for(p) {
        Ok(rf) => rf,
        Err(o) => return o,
    };
    match rform::ribbon_structures(&rf) {
        Ok(list) => {
            let chars: Vec<Value> = list
                .iter()
                .map(|rc| json!(rc.character.exps))
                .collect();
            pass(json!({
                "count": list.len(),
                "characters": chars,
                "enumeration_crosscheck": rform::ribbon_count_by_enumeration(&p.datum),
            }))
        }
        Err(e) => fail(json!({ "error": e.to_string() })),
    }
}

fn sym_center_outcome(p: &Presentation, oracle_bound: u64) -> Outcome {
    match symcenter::symmetric_center(&p.datum, &p.r1) {
        Ok(res) => {
            let preds = symcenter::predicates(&p.datum, &p.r1).unwrap();
            let oracle = if p.datum.dim_hopf() <= oracle_bound {
                match build_rform_for(p) {
                    Ok(rf) => match symcenter::hsym_brute_force(&rf, oracle_bound) {
                        Ok(brute) => {
                            let span = symcenter::hsym_span(&res, &p.datum);
                            Some(linalg::row_span_eq(&brute, &span))
                        }
                        Err(_) => None,
                    },
                    Err(o) => return o,
                }
            } else {
                None
            };
            let payload = json!({
                "gamma_perp_order": res.gamma_perp.order(),
                "gamma_perp_generators": res.gamma_perp.embedding.iter()
                    .map(|g| json!(g.exps)).collect::<Vec<_>>(),
                "v_perp_dim": res.v_perp.len(),
                "v_perp_basis": res.v_perp.iter()
                    .map(|v| Value::Array(v.iter().map(|s| Value::String(s.to_expression())).collect()))
                    .collect::<Vec<_>>(),
                "predicates": preds,
                "oracle_agreement": oracle,
            });
            if oracle == Some(false) {
                fail(payload)
            } else {
                pass(payload)
            }
        }
        Err(e) => input_error(e.to_string()),
    }
}

fn normalize_outcome(p: &Presentation) -> Outcome {
    match quadruple::normalize(&p.datum, &p.r1) {
        Ok(quad) => {
            let ctx = p.context();
            let q_values: Vec<String> = (0..quad.group.rank())
                .map(|i| {
                    ctx.zeta(quad.q.diag[i] as i64).to_expression()
                })
                .collect();
            pass(json!({
                "invariants": quad.group.invariants(),
                "q_on_generators": q_values,
                "degrees": quad.degrees.iter().map(|g| json!(g.exps)).collect::<Vec<_>>(),
                "r_alternating": matrix_strings(&quad.r.matrix),
            }))
        }
        Err(e) => input_error(e.to_string()),
    }
}

fn equiv_outcome(p: &Presentation, other: &Presentation, bound_group: u64) -> Outcome {
    // decisions that need no scalar comparison come first, so presentations
    // over different cyclotomic contexts can still be separated
    if p.datum.dim_v() != other.datum.dim_v() {
        return Outcome {
            status: "inequivalent".into(),
            payload: json!({ "reason": format!(
                "dim V differs: {} vs {}", p.datum.dim_v(), other.datum.dim_v()) }),
            exit: EXIT_FAIL,
        };
    }
    if p.datum.group.canonical_invariants() != other.datum.group.canonical_invariants() {
        return Outcome {
            status: "inequivalent".into(),
            payload: json!({ "reason": "groups are not isomorphic" }),
            exit: EXIT_FAIL,
        };
    }
    if p.context().order() != other.context().order() {
        // re-parse both in the joint field so scalars are comparable
        return input_error(format!(
            "presentations use different cyclotomic contexts (N = {} vs N = {}); \
             declare a common root_order",
            p.context().order(),
            other.context().order()
        ));
    }
    let qa = match quadruple::normalize(&p.datum, &p.r1) {
        Ok(q) => q,
        Err(e) => return input_error(e.to_string()),
    };
    let qb = match quadruple::normalize(&other.datum, &other.r1) {
        Ok(q) => q,
        Err(e) => return input_error(e.to_string()),
    };
    match quadruple::is_equivalent(p.context(), &qa, &qb, bound_group) {
        Equivalence::Equivalent(w) => Outcome {
            status: "equivalent".into(),
            payload: json!({
                "alpha_generator_images": w.alpha.gen_images.iter()
                    .map(|g| json!(g.exps)).collect::<Vec<_>>(),
                "f": matrix_strings(&w.f),
                "sign_class_note": "f and -f represent the same equivalence",
            }),
            exit: EXIT_PASS,
        },
        Equivalence::Inequivalent { reason } => Outcome {
            status: "inequivalent".into(),
            payload: json!({ "reason": reason }),
            exit: EXIT_FAIL,
        },
        Equivalence::Undecided { bound } => Outcome {
            status: "undecided".into(),
            payload: json!({ "reason": format!("group order exceeds search bound {bound}") }),
            exit: EXIT_UNDECIDED,
        },
    }
}

fn braid_outcome(p: &Presentation) -> Outcome {
    let rf = match build_rform_for(p) {
        Ok(rf) => rf,
        Err(o) => return o,
    };
    let datum = &p.datum;
    let n = datum.dim_v();
    let c_vv = datum.braiding_matrix();
    // squared braiding corner coefficients on extension pairs vs the
    // alternating form s = r1 - r1 ∘ τ
    let mut s_matrix = Vec::new();
    let mut verified = true;
    for i in 0..n {
        let mut row = Vec::new();
        for j in 0..n {
            let u = qlspace_core::rform::Comodule::extension(datum, i);
            let w = qlspace_core::rform::Comodule::extension(datum, j);
            let beta = rform::squared_braiding(&rf, &u, &w);
            let s = p.r1.value(i, j) - p.r1.value(j, i);
            let mut expected = linalg::identity(p.context(), 4);
            expected[0][3] = s.clone();
            if beta != expected {
                verified = false;
            }
            row.push(Value::String(s.to_expression()));
        }
        s_matrix.push(Value::Array(row));
    }
    let payload = json!({
        "braiding_on_v": matrix_strings(&c_vv),
        "squared_braiding_coefficients": s_matrix,
        "squared_braiding_is_identity_plus_corner": verified,
    });
    if verified {
        pass(payload)
    } else {
        fail(payload)
    }
}

fn cocycles_outcome(p: &Presentation) -> Outcome {
    let space = quadruple::cocycle_space(&p.datum);
    pass(json!({
        "dimension": space.dimension,
        "basis": space.basis.iter().map(|b| matrix_strings(&b.matrix)).collect::<Vec<_>>(),
    }))
}

fn h2inv_outcome(p: &Presentation) -> Outcome {
    match quadruple::h2_inv(&p.datum) {
        Ok(h) => {
            let recomputed = quadruple::alt_yd_dim_by_filter(&p.datum);
            let agree = recomputed == h.alt_dim;
            let payload = json!({
                "multiplier_order": h.multiplier_order,
                "alt_dim": h.alt_dim,
                "alt_dim_by_filter": recomputed,
                "crosscheck_agreement": agree,
            });
            if agree {
                pass(payload)
            } else {
                fail(payload)
            }
        }
        Err(e) => input_error(e.to_string()),
    }
}

fn autbr_outcome(p: &Presentation, bound_group: u64) -> Outcome {
    let quad = match quadruple::normalize(&p.datum, &p.r1) {
        Ok(q) => q,
        Err(e) => return input_error(e.to_string()),
    };
    match quadruple::aut_br(p.context(), &quad, bound_group) {
        Ok(aut) => pass(json!({
            "orthogonal_part_order": aut.orthogonal_part.len(),
            "orthogonal_part": aut.orthogonal_part.iter()
                .map(|a| a.gen_images.iter().map(|g| json!(g.exps)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "stabilizer_note": "membership in Aut(V, r)/{±id} is decided per query matrix",
        })),
        Err(qlspace_core::quadruple::QuadrupleError::Group(
            qlspace_core::abgroup::GroupError::TooLarge { bound, .. },
        )) => Outcome {
            status: "undecided".into(),
            payload: json!({ "reason": format!("group order exceeds search bound {bound}") }),
            exit: EXIT_UNDECIDED,
        },
        Err(e) => input_error(e.to_string()),
    }
}

fn double_outcome(p: &Presentation, emit: Option<&PathBuf>) -> Outcome {
    match double::drinfeld_double(&p.datum) {
        Ok(res) => {
            let name = if p.name.is_empty() {
                "double".to_string()
            } else {
                format!("{} double", p.name)
            };
            let emitted = Presentation::from_parts(
                name,
                "adjoint part of the Drinfeld center".into(),
                res.dv_datum.clone(),
                res.r_dv.clone(),
            );
            let toml_text = emitted.serialize();
            if let Some(path) = emit {
                if let Err(e) = std::fs::write(path, &toml_text) {
                    return input_error(format!("cannot write {}: {e}", path.display()));
                }
            }
            pass(json!({
                "sigma_order": res.sigma.order(),
                "sigma_invariants": res.sigma.abstract_group.invariants(),
                "sigma_perp_order": res.sigma_perp_order,
                "dim_a": res.dim_a,
                "symplectic_rank": res.r_dv.rank(),
                "congruent_to_standard_symplectic": res.congruent_to_standard_symplectic(),
                "pairing": res.pairing,
                "presentation_toml": toml_text,
            }))
        }
        Err(double::DoubleError::NotSelfDual(i)) => input_error(format!(
            "self-duality required: generator {i} has no inverse partner"
        )),
        Err(e) => input_error(e.to_string()),
    }
}

fn report_all_outcome(p: &Presentation, args: &CommonArgs) -> Outcome {
    let hopf_bound = args.bound_dim.unwrap_or(1024);
    let cqt_bound = args.bound_dim.unwrap_or(256);
    let parts = [
        ("hopf", hopf_outcome(p, hopf_bound)),
        ("rform", rform_outcome(p)),
        ("cqt_full", cqt_outcome(p, CqtMode::Full, cqt_bound)),
        ("cqt_h1", cqt_outcome(p, CqtMode::H1, cqt_bound)),
        ("ribbon", ribbon_outcome(p)),
        ("sym_center", sym_center_outcome(p, 128)),
        ("normalize", normalize_outcome(p)),
        ("braid", braid_outcome(p)),
        ("cocycles", cocycles_outcome(p)),
        ("h2inv", h2inv_outcome(p)),
        ("autbr", autbr_outcome(p, args.bound_group)),
    ];
    let mut payload = serde_json::Map::new();
    let mut exit = EXIT_PASS;
    for (key, outcome) in parts {
        payload.insert(
            key.to_string(),
            json!({ "status": outcome.status, "payload": outcome.payload }),
        );
        exit = exit.max(outcome.exit);
    }
    // the double only exists for self-dual data; report either way
    let double_part = if double::is_self_dual(&p.datum).is_some() {
        let o = double_outcome(p, None);
        exit = exit.max(o.exit);
        json!({ "status": o.status, "payload": o.payload })
    } else {
        json!({ "status": "skipped", "payload": { "reason": "datum is not self-dual" } })
    };
    payload.insert("double".into(), double_part);
    Outcome {
        status: if exit == EXIT_PASS { "pass" } else { "fail" }.into(),
        payload: Value::Object(payload),
        exit,
    }
}

fn rform_outcome(p: &Presentation) -> Outcome {
    match RForm::build(&p.datum, &p.r1) {
        Ok(rf) => {
            let datum = &p.datum;
            // normalization sanity on the spot: group restriction and
            // V-restriction round-trip through the built evaluator
            let mut restriction_ok = true;
            for g in datum.group.elements() {
                for h in datum.group.elements() {
                    let a = hopf::group_like(datum, &g);
                    let b = hopf::group_like(datum, &h);
                    if rf.eval(&a, &b) != datum.r0.eval(p.context(), &g, &h) {
                        restriction_ok = false;
                    }
                }
            }
            for i in 0..datum.dim_v() {
                for j in 0..datum.dim_v() {
                    let a = hopf::generator(datum, i);
                    let b = hopf::generator(datum, j);
                    if rf.eval(&a, &b) != *p.r1.value(i, j) {
                        restriction_ok = false;
                    }
                }
            }
            let payload = json!({
                "dim": datum.dim_hopf(),
                "table_materialized": rf.has_table(),
                "restrictions_match": restriction_ok,
                "yd_support_dimension": qlspace_core::qls::yd_support(datum).len(),
            });
            if restriction_ok {
                pass(payload)
            } else {
                fail(payload)
            }
        }
        Err(e) => input_error(e.to_string()),
    }
}

/// Runs a command, prints the JSON report to stdout, and returns the exit
/// code.  Wall-clock timing goes to stderr so reports stay byte-identical
/// across runs.
pub fn run(cli: Cli) -> i32 {
    let started = std::time::Instant::now();
    let (command_name, common, outcome) = match &cli.command {
        Command::VerifyHopf(args) => (
            "verify-hopf",
            args.clone(),
            load(args).map(|p| (p.clone(), hopf_outcome(&p, args.bound_dim.unwrap_or(1024)))),
        ),
        Command::BuildRform(args) => (
            "build-rform",
            args.clone(),
            load(args).map(|p| (p.clone(), rform_outcome(&p))),
        ),
        Command::VerifyCqt(cqt) => {
            let mode = match cqt.mode.as_str() {
                "full" => CqtMode::Full,
                "h1" => CqtMode::H1,
                other => {
                    let o = input_error(format!("unknown mode '{other}', expected full|h1"));
                    return finish("verify-cqt", &cqt.common, None, o, started);
                }
            };
            (
                "verify-cqt",
                cqt.common.clone(),
                load(&cqt.common).map(|p| {
                    let bound = cqt.common.bound_dim.unwrap_or(256);
                    (p.clone(), cqt_outcome(&p, mode, bound))
                }),
            )
        }
        Command::Braid(args) => (
            "braid",
            args.clone(),
            load(args).map(|p| (p.clone(), braid_outcome(&p))),
        ),
        Command::Ribbon(args) => (
            "ribbon",
            args.clone(),
            load(args).map(|p| (p.clone(), ribbon_outcome(&p))),
        ),
        Command::SymCenter(args) => (
            "sym-center",
            args.clone(),
            load(args).map(|p| {
                let bound = args.bound_dim.unwrap_or(128);
                (p.clone(), sym_center_outcome(&p, bound))
            }),
        ),
        Command::Normalize(args) => (
            "normalize",
            args.clone(),
            load(args).map(|p| (p.clone(), normalize_outcome(&p))),
        ),
        Command::Equiv(eq) => (
            "equiv",
            eq.common.clone(),
            load(&eq.common).and_then(|p| {
                Presentation::parse_file(&eq.other)
                    .map_err(|e| input_error(e.to_string()))
                    .map(|other| {
                        let o = equiv_outcome(&p, &other, eq.common.bound_group);
                        (p, o)
                    })
            }),
        ),
        Command::Cocycles(args) => (
            "cocycles",
            args.clone(),
            load(args).map(|p| (p.clone(), cocycles_outcome(&p))),
        ),
        Command::H2Inv(args) => (
            "h2inv",
            args.clone(),
            load(args).map(|p| (p.clone(), h2inv_outcome(&p))),
        ),
        Command::AutBr(args) => (
            "autbr",
            args.clone(),
            load(args).map(|p| (p.clone(), autbr_outcome(&p, args.bound_group))),
        ),
        Command::Double(d) => (
            "double",
            d.common.clone(),
            load(&d.common).map(|p| {
                let o = double_outcome(&p, d.emit.as_ref());
                (p, o)
            }),
        ),
        Command::ReportAll(args) => (
            "report-all",
            args.clone(),
            load(args).map(|p| {
                let o = report_all_outcome(&p, args);
                (p, o)
            }),
        ),
    };
    match outcome {
        Ok((p, o)) => finish(command_name, &common, Some(&p), o, started),
        Err(o) => finish(command_name, &common, None, o, started),
    }
}

fn finish(
    command: &str,
    args: &CommonArgs,
    presentation: Option<&Presentation>,
    outcome: Outcome,
    started: std::time::Instant,
) -> i32 {
    let report = Report {
        command: command.to_string(),
        input: args.input.display().to_string(),
        name: presentation.map(|p| p.name.clone()).unwrap_or_default(),
        status: outcome.status,
        seed: args.seed,
        payload: outcome.payload,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let text = serde_json::to_string_pretty(&report).expect("report serialization");
    println!("{text}");
    if let Some(path) = &args.json {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return EXIT_INPUT;
        }
    }
    eprintln!(
        "{} finished in {} ms",
        command,
        started.elapsed().as_millis()
    );
    outcome.exit
}
