//! `qp`: computations with quiver representations and flag varieties —
//! root tables, Auslander-Reiten quivers, extended-quiver modules,
//! brute-force point counts over prime fields, and verified affine pavings.

mod dot;
mod formats;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use formats::{
    bound_to_json, parse_dimvec, quiver_from_file, reduce_guarded, rep_from_file, rep_to_json,
    CountingRecord, PavingEntry, PavingReport, VerificationLine,
};
use qp_core::artheory::{
    compute_s_x, compute_x_s, decompose_rational, find_minimal_sectional_mono, hom_gram,
    indecomposable, knit, minimal_sectional_monos_into,
};
use qp_core::extended::{ext_profile, hom_r_dim, phi, validate, ExtQuiver};
use qp_core::field::Rationals;
use qp_core::grassmann::{
    count_flags_directly, count_submodules, count_submodules_all, degree_bound,
    interpolate_polynomial, Budget, EnumError,
};
use qp_core::paving::{for_each_in_box, Paver};
use qp_core::quiver::{classify, render_stacked, DimVec, Family, Quiver};
use qp_core::rep::{ext1_dim, hom_dim, Rep};
use qp_core::roots::{canonical_quiver, minimal_imaginary_root, positive_roots};

const EXIT_MISMATCH: u8 = 2;
const EXIT_UNRESOLVED: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "qp", version, about = "quiver representations, point counts, and affine pavings of quiver flag varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print root-system tables: positive roots of a Dynkin diagram or the
    /// minimal imaginary root of an affine diagram, in the two-row layout.
    Roots(RootsArgs),
    /// Classify the underlying graph of a quiver (Dynkin/affine family).
    Classify(ClassifyArgs),
    /// Construct the indecomposable representation with a given root.
    Indec(IndecArgs),
    /// Dimension of Hom(M, N); optionally over the extended algebra via the
    /// canonical images.
    Hom(HomArgs),
    /// Dimension of Ext^1(M, N); with --d, Ext^i over the extended algebra.
    Ext(ExtArgs),
    /// Describe the extended quiver of given depth (vertices, arrows,
    /// virtual arrows, path identifications).
    Extquiver(ExtquiverArgs),
    /// Apply the canonical functor to a representation and print the bound
    /// module in JSON.
    Phi(PhiArgs),
    /// Knit the Auslander-Reiten quiver; print nodes and arrows, optionally
    /// export DOT (solid = irreducible, dashed = translation).
    Ar(ArArgs),
    /// Translate an indecomposable: dimension vector of tau M (or tau^{-1} M).
    Tau(TauArgs),
    /// Print the almost-split sequence ending at an indecomposable.
    Arseq(ArseqArgs),
    /// Minimal sectional monos into an indecomposable (the engine's choice
    /// first).
    Secmono(SecmonoArgs),
    /// The kernel submodule X_S and the maximal submodule S^X attached to a
    /// pair with one-dimensional extension space.
    Xs(XsArgs),
    /// Brute-force point counts of flag varieties / quiver Grassmannians
    /// over prime fields, as JSON-lines records.
    Count(CountArgs),
    /// Compute affine pavings and verify them against brute-force counts.
    Pave(PaveArgs),
    /// Run the verification battery on a quiver: oracle equivalence,
    /// Euler-form/Ext consistency, and paving-vs-count checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RootsArgs {
    /// Family: A | D | E | affA | affD | affE
    #[arg(long = "type")]
    family: String,
    #[arg(long)]
    rank: usize,
    /// Print only the maximal positive root (Dynkin families).
    #[arg(long)]
    maximal: bool,
    /// Print only the minimal imaginary root (affine families).
    #[arg(long)]
    delta: bool,
    #[arg(long)]
    json: bool,
    /// Emit the canonical quiver of this family as a quiver description file
    /// (usable as input to every other subcommand).
    #[arg(long)]
    emit_quiver: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    quiver: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct IndecArgs {
    quiver: String,
    /// Root as comma-separated entries in vertex order.
    #[arg(long)]
    root: String,
    /// Write the representation JSON here instead of stdout.
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct HomArgs {
    quiver: String,
    #[arg(long)]
    m: String,
    #[arg(long)]
    n: String,
    /// Compute over the depth-d extended algebra via the canonical functor.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ExtArgs {
    quiver: String,
    /// Representation file for the first argument (with --d: its canonical
    /// image is used).
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Bound-module file for the first argument (alternative to --m).
    #[arg(long)]
    tm: Option<String>,
    #[arg(long)]
    tn: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    strict: bool,
    /// Ext degree over the extended algebra (0, 1 or 2); default 1.
    #[arg(long, default_value_t = 1)]
    i: usize,
}

#[derive(Args)]
struct ExtquiverArgs {
    quiver: String,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PhiArgs {
    quiver: String,
    #[arg(long)]
    rep: String,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    strict: bool,
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct ArArgs {
    quiver: String,
    /// Write a DOT rendering here.
    #[arg(long)]
    dot: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TauArgs {
    quiver: String,
    #[arg(long)]
    root: String,
    #[arg(long)]
    inverse: bool,
}

#[derive(Args)]
struct ArseqArgs {
    quiver: String,
    /// Root of the (non-projective) right end term.
    #[arg(long)]
    root: String,
}

#[derive(Args)]
struct SecmonoArgs {
    quiver: String,
    #[arg(long)]
    root: String,
    /// List every candidate, not just the selected one.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct XsArgs {
    quiver: String,
    /// Root of X.
    #[arg(long)]
    x: String,
    /// Root of S.
    #[arg(long)]
    s: String,
}

#[derive(Args)]
struct CountArgs {
    quiver: String,
    /// Root of an indecomposable (mutually exclusive with --rep).
    #[arg(long)]
    root: Option<String>,
    /// Representation file (integer matrices over the rationals).
    #[arg(long)]
    rep: Option<String>,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    strict: bool,
    /// Extended dimension vector (level 1 first); mutually exclusive with --all-f.
    #[arg(long)]
    f: Option<String>,
    /// Count every dimension vector in one sweep.
    #[arg(long)]
    all_f: bool,
    /// Primes, comma separated.
    #[arg(long, default_value = "2,3")]
    q: String,
    /// submodules (default) | chains
    #[arg(long, default_value = "submodules")]
    oracle: String,
    /// Run both oracles and fail on disagreement.
    #[arg(long)]
    cross_check: bool,
    /// Node-visit budget (also via QP_MAX_NODES).
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Interpolate a counting polynomial through enough safe primes.
    #[arg(long)]
    interpolate: bool,
}

#[derive(Args)]
struct PaveArgs {
    quiver: String,
    #[arg(long)]
    root: Option<String>,
    #[arg(long)]
    rep: Option<String>,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    all_f: bool,
    /// Primes used to verify the paving against brute-force counts.
    #[arg(long, default_value = "2,3")]
    verify_q: String,
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Also interpolate counting polynomials and compare with the cells.
    #[arg(long)]
    interpolate: bool,
    /// Disable the summand-peeling pattern for difference pieces (narrower
    /// repertoire; exercises mono backtracking).
    #[arg(long)]
    no_summand_peel: bool,
}

#[derive(Args)]
struct VerifyArgs {
    quiver: String,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value = "2,3")]
    q: String,
    /// Seed for the randomized consistency checks.
    #[arg(long, default_value_t = 20240811)]
    seed: u64,
    /// Randomized sample count.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long)]
    max_nodes: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage and parse problems exit 1 uniformly
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if let Some(EnumError::BudgetExceeded { .. }) = e.downcast_ref::<EnumError>() {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_BUDGET);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Roots(a) => cmd_roots(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Indec(a) => cmd_indec(a),
        Command::Hom(a) => cmd_hom(a),
        Command::Ext(a) => cmd_ext(a),
        Command::Extquiver(a) => cmd_extquiver(a),
        Command::Phi(a) => cmd_phi(a),
        Command::Ar(a) => cmd_ar(a),
        Command::Tau(a) => cmd_tau(a),
        Command::Arseq(a) => cmd_arseq(a),
        Command::Secmono(a) => cmd_secmono(a),
        Command::Xs(a) => cmd_xs(a),
        Command::Count(a) => cmd_count(a),
        Command::Pave(a) => cmd_pave(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn parse_family(s: &str) -> Result<Family> {
    Ok(match s {
        "A" | "a" => Family::A,
        "D" | "d" => Family::D,
        "E" | "e" => Family::E,
        "affA" | "affa" => Family::AffineA,
        "affD" | "affd" => Family::AffineD,
        "affE" | "affe" => Family::AffineE,
        other => bail!("unknown family `{other}` (use A, D, E, affA, affD, affE)"),
    })
}

fn cmd_roots(a: RootsArgs) -> Result<u8> {
    let family = parse_family(&a.family)?;
    let q = canonical_quiver(family, a.rank)
        .ok_or_else(|| anyhow!("no diagram of type {family} with rank {}", a.rank))?;
    let shape = classify(&q).map_err(|e| anyhow!("{e}"))?;
    if a.emit_quiver {
        println!("{}", serde_json::to_string_pretty(&formats::quiver_to_json(&q))?);
        return Ok(0);
    }
    if family.is_affine() {
        let delta = minimal_imaginary_root(&q).map_err(|e| anyhow!("{e}"))?;
        if a.json {
            println!("{}", serde_json::json!({ "family": a.family, "rank": a.rank, "delta": delta }));
        } else {
            println!("{}", render_stacked(&shape, &delta));
        }
        return Ok(0);
    }
    if a.delta {
        bail!("--delta applies to affine families");
    }
    let roots = positive_roots(&q).map_err(|e| anyhow!("{e}"))?;
    if a.maximal {
        let max = roots.last().unwrap();
        if a.json {
            println!("{}", serde_json::json!({ "family": a.family, "rank": a.rank, "maximal": max }));
        } else {
            println!("{}", render_stacked(&shape, max));
        }
        return Ok(0);
    }
    if a.json {
        println!("{}", serde_json::json!({ "family": a.family, "rank": a.rank, "roots": roots }));
    } else {
        for (i, r) in roots.iter().enumerate() {
            if i > 0 {
                println!();
            }
            println!("{}", render_stacked(&shape, r));
        }
    }
    Ok(0)
}

fn cmd_classify(a: ClassifyArgs) -> Result<u8> {
    let q = quiver_from_file(&a.quiver)?;
    let shape = classify(&q).map_err(|e| anyhow!("{e}"))?;
    if a.json {
        println!(
            "{}",
            serde_json::json!({
                "family": format!("{}", shape.family),
                "rank": shape.rank,
                "acyclic": q.is_acyclic(),
            })
        );
    } else {
        println!("{} {}", shape.family, shape.rank);
    }
    Ok(0)
}

fn load_dynkin_ar(path: &str) -> Result<(Quiver, qp_core::artheory::ArQuiver)> {
    let q = quiver_from_file(path)?;
    let ar = knit(&q).map_err(|e| anyhow!("{e}"))?;
    Ok((q, ar))
}

fn cmd_indec(a: IndecArgs) -> Result<u8> {
    let (q, ar) = load_dynkin_ar(&a.quiver)?;
    let root = parse_dimvec(&a.root, q.n_vertices())?;
    let m = indecomposable(&ar, &root).map_err(|e| anyhow!("{e}"))?;
    let json = serde_json::to_string_pretty(&rep_to_json(&q, &m)?)?;
    match a.output {
        Some(path) => std::fs::write(&path, json + "\n").with_context(|| format!("writing `{path}`"))?,
        None => println!("{json}"),
    }
    Ok(0)
}

fn load_rep_arg(q: &Quiver, path: &str) -> Result<Rep<Rationals>> {
    let (m, modulus) = rep_from_file(q, path)?;
    if modulus.is_some() {
        bail!("`{path}` carries a modulus; this command expects a rational (integer-matrix) representation");
    }
    Ok(m)
}

fn cmd_hom(a: HomArgs) -> Result<u8> {
    let q = quiver_from_file(&a.quiver)?;
    let m = load_rep_arg(&q, &a.m)?;
    let n = load_rep_arg(&q, &a.n)?;
    match a.d {
        None => println!("{}", hom_dim(&q, &Rationals, &m, &n)),
        Some(d) => {
            let eq = ExtQuiver::build(&q, d, a.strict).map_err(|e| anyhow!("{e}"))?;
            let tm = phi(&eq, &Rationals, &m);
            let tn = phi(&eq, &Rationals, &n);
            println!("{}", hom_r_dim(&eq, &Rationals, &tm, &tn));
        }
    }
    Ok(0)
}

fn cmd_ext(a: ExtArgs) -> Result<u8> {
    let q = quiver_from_file(&a.quiver)?;
    // bound-module inputs: compute over the algebra they live on
    if a.tm.is_some() || a.tn.is_some() {
        let (tm_path, tn_path) = match (&a.tm, &a.tn) {
            (Some(x), Some(y)) => (x, y),
            _ => bail!("--tm and --tn must be given together"),
        };
        let (eq1, tm, _) = formats::bound_from_file(&q, tm_path)?;
        let (eq2, tn, _) = formats::bound_from_file(&q, tn_path)?;
        if (eq1.d, eq1.strict) != (eq2.d, eq2.strict) {
            bail!("bound modules live over different extended quivers");
        }
        let bad = validate(&eq1, &tm);
        if !bad.is_empty() {
            bail!("`{tm_path}` violates {} path identification(s)", bad.len());
        }
        let bad = validate(&eq1, &tn);
        if !bad.is_empty() {
            bail!("`{tn_path}` violates {} path identification(s)", bad.len());
        }
        let e = qp_core::extended::ext_r(&eq1, &Rationals, &tm, &tn, a.i).map_err(|e| anyhow!("{e}"))?;
        println!("{e}");
        return Ok(0);
    }
    let (m_path, n_path) = match (&a.m, &a.n) {
        (Some(x), Some(y)) => (x, y),
        _ => bail!("pass --m and --n (representations) or --tm and --tn (bound modules)"),
    };
    let m = load_rep_arg(&q, m_path)?;
    let n = load_rep_arg(&q, n_path)?;
    match a.d {
        None => {
            if a.i != 1 {
                bail!("the path algebra is hereditary; only Ext^1 is computed without --d");
            }
            println!("{}", ext1_dim(&q, &Rationals, &m, &n).map_err(|e| anyhow!("{e}"))?);
        }
        Some(d) => {
            let eq = ExtQuiver::build(&q, d, a.strict).map_err(|e| anyhow!("{e}"))?;
            let tm = phi(&eq, &Rationals, &m);
            let tn = phi(&eq, &Rationals, &n);
            let e = qp_core::extended::ext_r(&eq, &Rationals, &tm, &tn, a.i).map_err(|e| anyhow!("{e}"))?;
            println!("{e}");
        }
    }
    Ok(0)
}

fn cmd_extquiver(a: ExtquiverArgs) -> Result<u8> {
    let q = quiver_from_file(&a.quiver)?;
    let eq = ExtQuiver::build(&q, a.d, a.strict).map_err(|e| anyhow!("{e}"))?;
    if a.json {
        let vertices: Vec<String> = (0..eq.n_vertices()).map(|v| formats::ext_vertex_key(&q, &eq, v)).collect();
        let arrows: Vec<serde_json::Value> = eq
            .arrows
            .iter()
            .map(|arr| {
                serde_json::json!({
                    "id": formats::ext_arrow_key(&q, arr),
                    "from": formats::ext_vertex_key(&q, &eq, arr.src),
                    "to": formats::ext_vertex_key(&q, &eq, arr.dst),
                })
            })
            .collect();
        let virtuals: Vec<serde_json::Value> = eq
            .virtuals
            .iter()
            .map(|c| {
                serde_json::json!({
                    "from": formats::ext_vertex_key(&q, &eq, c.src),
                    "to": formats::ext_vertex_key(&q, &eq, c.dst),
                    "path_a": [formats::ext_arrow_key(&q, &eq.arrows[c.path_a.0]), formats::ext_arrow_key(&q, &eq.arrows[c.path_a.1])],
                    "path_b": [formats::ext_arrow_key(&q, &eq.arrows[c.path_b.0]), formats::ext_arrow_key(&q, &eq.arrows[c.path_b.1])],
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::json!({ "d": a.d, "strict": a.strict, "vertices": vertices, "arrows": arrows, "virtual_arrows": virtuals })
        );
    } else {
        println!(
            "extended quiver: depth {}{}; {} vertices, {} arrows, {} virtual arrows",
            a.d,
            if a.strict { " (strict)" } else { "" },
            eq.n_vertices(),
            eq.arrows.len(),
            eq.virtuals.len()
        );
    }
    Ok(0)
}

fn cmd_phi(a: PhiArgs) -> Result<u8> {
    let q = quiver_from_file(&a.quiver)?;
    let m = load_rep_arg(&q, &a.rep)?;
    let eq = ExtQuiver::build(&q, a.d, a.strict).map_err(|e| anyhow!("{e}"))?;
    let t = phi(&eq, &Rationals, &m);
    debug_assert!(validate(&eq, &t).is_empty());
    let json = serde_json::to_string_pretty(&bound_to_json(&q, &eq, &t)?)?;
    match a.output {
        Some(path) => std::fs::write(&path, json + "\n").with_context(|| format!("writing `{path}`"))?,
        None => println!("{json}"),
    }
    Ok(0)
}

fn cmd_ar(a: ArArgs) -> Result<u8> {
    let (q, ar) = load_dynkin_ar(&a.quiver)?;
    let shape = classify(&q).map_err(|e| anyhow!("{e}"))?;
    if let Some(path) = &a.dot {
        std::fs::write(path, dot::ar_quiver_dot(&ar)).with_context(|| format!("writing `{path}`"))?;
    }
    if a.json {
        let nodes: Vec<serde_json::Value> = ar
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                serde_json::json!({
                    "id": i,
                    "root": n.root,
                    "projective": ar.is_projective(i),
                    "injective": ar.is_injective(i),
                    "tau": ar.tau[i],
                })
            })
            .collect();
        let arrows: Vec<serde_json::Value> = ar
            .arrows
            .iter()
            .map(|arr| serde_json::json!({ "from": arr.from, "to": arr.to }))
            .collect();
        println!("{}", serde_json::json!({ "nodes": nodes, "arrows": arrows }));
    } else {
        println!(
            "{} indecomposables, {} irreducible arrows, {} translation pairs",
            ar.nodes.len(),
            ar.arrows.len(),
            ar.tau.iter().flatten().count()
        );
        for (i, n) in ar.nodes.iter().enumerate() {
            let tag = if ar.is_projective(i) {
                " (projective)"
            } else if ar.is_injective(i) {
                " (injective)"
            } else {
                ""
            };
            println!("--\n{}{tag}", render_stacked(&shape, &n.root));
        }
    }
    Ok(0)
}

fn cmd_tau(a: TauArgs) -> Result<u8> {
    let (q, ar) = load_dynkin_ar(&a.quiver)?;
    let root = parse_dimvec(&a.root, q.n_vertices())?;
    let m = indecomposable(&ar, &root).map_err(|e| anyhow!("{e}"))?;
    let t = if a.inverse {
        qp_core::artheory::tau_inv(&q, &m)
    } else {
        qp_core::artheory::tau(&q, &m)
    }
    .map_err(|e| anyhow!("{e}"))?;
    let shape = classify(&q).map_err(|e| anyhow!("{e}"))?;
    println!("{}", render_stacked(&shape, &t.dim_vec()));
    Ok(0)
}

fn cmd_arseq(a: ArseqArgs) -> Result<u8> {
    let (q, ar) = load_dynkin_ar(&a.quiver)?;
    let root = parse_dimvec(&a.root, q.n_vertices())?;
    let node = ar.node_by_root(&root).ok_or_else(|| anyhow!("{root:?} is not a root"))?;
    let seq = ar.ar_sequence(node).map_err(|e| anyhow!("{e}"))?;
    let shape = classify(&q).map_err(|e| anyhow!("{e}"))?;
    let fmt = |n: usize| render_stacked(&shape, &ar.nodes[n].root).replace('\n', " / ");
    let middle: Vec<String> = seq.middle.iter().map(|&m| fmt(m)).collect();
    println!("0 -> {} -> {} -> {} -> 0", fmt(seq.tau_end), middle.join(" (+) "), fmt(seq.end));
    Ok(0)
}

fn cmd_secmono(a: SecmonoArgs) -> Result<u8> {
    let (q, ar) = load_dynkin_ar(&a.quiver)?;
    let root = parse_dimvec(&a.root, q.n_vertices())?;
    let node = ar.node_by_root(&root).ok_or_else(|| anyhow!("{root:?} is not a root"))?;
    let shape = classify(&q).map_err(|e| anyhow!("{e}"))?;
    let fmt = |n: usize| render_stacked(&shape, &ar.nodes[n].root).replace('\n', " / ");
    if a.all {
        for cand in minimal_sectional_monos_into(&ar, node) {
            let path: Vec<String> = cand.nodes.iter().map(|&n| fmt(n)).collect();
            println!("{}", path.join(" -> "));
        }
    } else {
        match find_minimal_sectional_mono(&ar, node) {
            Some(cand) => {
                println!("{} -> {}", fmt(cand.source()), fmt(node));
            }
            None => println!("none"),
        }
    }
    Ok(0)
}

fn cmd_xs(a: XsArgs) -> Result<u8> {
    let (q, ar) = load_dynkin_ar(&a.quiver)?;
    let x_root = parse_dimvec(&a.x, q.n_vertices())?;
    let s_root = parse_dimvec(&a.s, q.n_vertices())?;
    let x = indecomposable(&ar, &x_root).map_err(|e| anyhow!("{e}"))?;
    let s = indecomposable(&ar, &s_root).map_err(|e| anyhow!("{e}"))?;
    let (_, xs) = compute_x_s(&q, &x, &s).map_err(|e| anyhow!("{e}"))?;
    let (_, sx) = compute_s_x(&q, &x, &s).map_err(|e| anyhow!("{e}"))?;
    let gram = hom_gram(&ar);
    let describe = |m: &Rep<Rationals>| -> Result<String> {
        if m.is_zero() {
            return Ok("0".to_string());
        }
        let classes = decompose_rational(&ar, &gram, m).map_err(|e| anyhow!("{e}"))?;
        Ok(classes
            .iter()
            .map(|&(n, mult)| {
                let base = format!("{:?}", ar.nodes[n].root);
                if mult > 1 {
                    format!("{base}^{mult}")
                } else {
                    base
                }
            })
            .collect::<Vec<_>>()
            .join(" (+) "))
    };
    println!("X_S = {}  (dim {:?})", describe(&xs)?, xs.dim_vec());
    println!("S^X = {}  (dim {:?})", describe(&sx)?, sx.dim_vec());
    Ok(0)
}

fn budget_from(max_nodes: Option<u64>) -> Budget {
    let limit = max_nodes
        .or_else(|| std::env::var("QP_MAX_NODES").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(200_000_000);
    Budget::new(limit)
}

fn parse_primes(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| anyhow!("bad prime `{x}`: {e}")))
        .collect()
}

/// Resolves the module selector (--root or --rep) to a rational rep.
fn resolve_rep(q: &Quiver, root: &Option<String>, rep: &Option<String>) -> Result<(Rep<Rationals>, String)> {
    match (root, rep) {
        (Some(r), None) => {
            let ar = knit(q).map_err(|e| anyhow!("indecomposables by root need a Dynkin quiver: {e}"))?;
            let root = parse_dimvec(r, q.n_vertices())?;
            let m = indecomposable(&ar, &root).map_err(|e| anyhow!("{e}"))?;
            Ok((m, format!("root:{r}")))
        }
        (None, Some(path)) => {
            let m = load_rep_arg(q, path)?;
            Ok((m, path.clone()))
        }
        _ => bail!("choose exactly one of --root or --rep"),
    }
}

fn cmd_count(a: CountArgs) -> Result<u8> {
    let q = quiver_from_file(&a.quiver)?;
    let (m, rep_id) = resolve_rep(&q, &a.root, &a.rep)?;
    if a.strict && a.d < 2 {
        bail!("strict flags require --d >= 2");
    }
    let eq = ExtQuiver::build(&q, a.d, a.strict).map_err(|e| anyhow!("{e}"))?;
    let primes = parse_primes(&a.q)?;
    let mut budget = budget_from(a.max_nodes);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut mismatch = false;

    let fs: Option<Vec<DimVec>> = match (&a.f, a.all_f) {
        (Some(s), false) => Some(vec![parse_dimvec(s, eq.n_vertices())?]),
        (None, true) => None,
        _ => bail!("choose exactly one of --f or --all-f"),
    };
    if a.oracle != "chains" && a.oracle != "submodules" {
        bail!("--oracle must be `submodules` or `chains`");
    }
    let use_chains = a.oracle == "chains";

    let mut per_f_counts: BTreeMap<DimVec, Vec<(u64, u64)>> = BTreeMap::new();
    for &p in &primes {
        let (fp, mp) = reduce_guarded(&q, &m, p)?;
        let t = phi(&eq, &fp, &mp);
        let mut table: BTreeMap<DimVec, u64> = BTreeMap::new();
        match &fs {
            Some(list) => {
                for f in list {
                    let c = if use_chains {
                        count_flags_directly(&q, fp, &mp, a.d, a.strict, f, &mut budget)?
                    } else {
                        count_submodules(&eq, fp, &t, f, &mut budget)?
                    };
                    table.insert(f.clone(), c);
                }
            }
            None => {
                let all = count_submodules_all(&eq, fp, &t, &mut budget)?;
                if use_chains {
                    for f in all.keys() {
                        let c = count_flags_directly(&q, fp, &mp, a.d, a.strict, f, &mut budget)?;
                        table.insert(f.clone(), c);
                    }
                } else {
                    table = all;
                }
            }
        }
        for (f, &count) in &table {
            if a.cross_check {
                let other = if use_chains {
                    count_submodules(&eq, fp, &t, f, &mut budget)?
                } else {
                    count_flags_directly(&q, fp, &mp, a.d, a.strict, f, &mut budget)?
                };
                if other != count {
                    mismatch = true;
                    eprintln!("cross-check mismatch at f={f:?} p={p}: {count} vs {other}");
                }
            }
            per_f_counts.entry(f.clone()).or_default().push((p, count));
            let record = CountingRecord {
                quiver: a.quiver.clone(),
                rep: rep_id.clone(),
                d: a.d,
                strict: a.strict,
                f: f.clone(),
                p,
                count,
                oracle: Some(a.oracle.clone()),
                poly: None,
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }

    if a.interpolate {
        let phi_dims: Vec<usize> = {
            let ext_dim = eq.phi_dim(&m.dim_vec());
            ext_dim.iter().map(|&x| x as usize).collect()
        };
        for (f, counts) in &per_f_counts {
            let bound = degree_bound(&phi_dims, f);
            let mut samples = counts.clone();
            let mut p = samples.last().map(|&(pp, _)| pp + 1).unwrap_or(2);
            while samples.len() < bound + 1 {
                if let Ok((fp, mp)) = reduce_guarded(&q, &m, p) {
                    let t = phi(&eq, &fp, &mp);
                    let c = count_submodules(&eq, fp, &t, f, &mut budget)?;
                    samples.push((p, c));
                }
                p += 1;
            }
            let poly = interpolate_polynomial(&samples, bound).map_err(|e| anyhow!("{e}"))?;
            let coeffs: Vec<i64> = poly
                .coeffs
                .iter()
                .map(|c| i64::try_from(c).map_err(|_| anyhow!("coefficient out of range")))
                .collect::<Result<_>>()?;
            let record = CountingRecord {
                quiver: a.quiver.clone(),
                rep: rep_id.clone(),
                d: a.d,
                strict: a.strict,
                f: f.clone(),
                p: 0,
                count: 0,
                oracle: Some("interpolation".into()),
                poly: Some(coeffs),
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }

    Ok(if mismatch { EXIT_MISMATCH } else { 0 })
}

fn cmd_pave(a: PaveArgs) -> Result<u8> {
    let q = quiver_from_file(&a.quiver)?;
    let shape = classify(&q).map_err(|e| anyhow!("{e}"))?;
    if !shape.family.is_dynkin() {
        bail!(
            "affine and wild inputs are out of scope for the paving engine (family: {})",
            shape.family
        );
    }
    if a.strict && a.d < 2 {
        bail!("strict flags require --d >= 2");
    }
    let (m, rep_id) = resolve_rep(&q, &a.root, &a.rep)?;
    let ar = knit(&q).map_err(|e| anyhow!("{e}"))?;
    let mut paver = Paver::new(&ar, a.d, a.strict).map_err(|e| anyhow!("{e}"))?;
    paver.set_summand_peeling(!a.no_summand_peel);
    let eq = ExtQuiver::build(&q, a.d, a.strict).map_err(|e| anyhow!("{e}"))?;
    let primes = parse_primes(&a.verify_q)?;
    let mut budget = budget_from(a.max_nodes);

    let phi_dims = eq.phi_dim(&m.dim_vec());
    let fs: Vec<DimVec> = match (&a.f, a.all_f) {
        (Some(s), false) => vec![parse_dimvec(s, eq.n_vertices())?],
        (None, true) => {
            let mut all = Vec::new();
            let zero = vec![0i64; phi_dims.len()];
            for_each_in_box::<std::convert::Infallible>(&zero, &phi_dims, &mut |f| {
                all.push(f.clone());
                Ok(())
            })
            .unwrap();
            if all.len() > 200_000 {
                bail!("{} dimension vectors in the full box; pass --f explicitly", all.len());
            }
            all
        }
        _ => bail!("choose exactly one of --f or --all-f"),
    };

    // brute tables per prime, one sweep each
    let mut brute: BTreeMap<u64, BTreeMap<DimVec, u64>> = BTreeMap::new();
    for &p in &primes {
        let (fp, mp) = reduce_guarded(&q, &m, p)?;
        let t = phi(&eq, &fp, &mp);
        brute.insert(p, count_submodules_all(&eq, fp, &t, &mut budget)?);
    }

    let mut any_unresolved = false;
    let mut any_mismatch = false;
    let mut entries = Vec::new();
    for f in &fs {
        match paver.pave(&m, f) {
            Ok(cells) => {
                let mut verification = Vec::new();
                for &p in &primes {
                    let b = brute[&p].get(f).copied().unwrap_or(0);
                    let paved = cells.eval(p);
                    let ok = paved == b as u128;
                    if !ok {
                        any_mismatch = true;
                    }
                    verification.push(VerificationLine { p, paving: paved, brute: b, matches: ok });
                }
                let poly = if a.interpolate {
                    let bound = cells.cells.keys().max().copied().unwrap_or(0) as usize;
                    let mut samples: Vec<(u64, u64)> = Vec::new();
                    let mut p = 2;
                    while samples.len() < bound + 1 {
                        if let Ok((fp, mp)) = reduce_guarded(&q, &m, p) {
                            let t = phi(&eq, &fp, &mp);
                            samples.push((p, count_submodules(&eq, fp, &t, f, &mut budget)?));
                        }
                        p += 1;
                    }
                    let poly = interpolate_polynomial(&samples, bound).map_err(|e| anyhow!("{e}"))?;
                    if !poly.has_nonnegative_coeffs() {
                        any_mismatch = true;
                    }
                    let cell_coeffs: Vec<i64> = (0..=bound as u32)
                        .map(|d| cells.cells.get(&d).copied().unwrap_or(0) as i64)
                        .collect();
                    let poly_coeffs: Vec<i64> = poly
                        .coeffs
                        .iter()
                        .map(|c| i64::try_from(c).map_err(|_| anyhow!("coefficient out of range")))
                        .collect::<Result<_>>()?;
                    let mut padded = poly_coeffs.clone();
                    padded.resize(bound + 1, 0);
                    if padded != cell_coeffs {
                        any_mismatch = true;
                    }
                    Some(poly_coeffs)
                } else {
                    None
                };
                entries.push(PavingEntry {
                    f: f.clone(),
                    status: "resolved".into(),
                    cells: Some(cells.cells.clone()),
                    verification,
                    poly,
                    diagnostic: None,
                });
            }
            Err(e) => {
                any_unresolved = true;
                entries.push(PavingEntry {
                    f: f.clone(),
                    status: "unresolved".into(),
                    cells: None,
                    verification: Vec::new(),
                    poly: None,
                    diagnostic: Some(format!("{e}")),
                });
            }
        }
    }
    let status = if any_unresolved {
        "unresolved"
    } else if any_mismatch {
        "mismatch"
    } else {
        "ok"
    };
    let report = PavingReport {
        quiver: a.quiver.clone(),
        rep: rep_id,
        d: a.d,
        strict: a.strict,
        results: entries,
        status: status.into(),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(match status {
        "unresolved" => EXIT_UNRESOLVED,
        "mismatch" => EXIT_MISMATCH,
        _ => 0,
    })
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let q = quiver_from_file(&a.quiver)?;
    let shape = classify(&q).map_err(|e| anyhow!("{e}"))?;
    if !shape.family.is_dynkin() {
        bail!("verification battery requires a Dynkin quiver (got {})", shape.family);
    }
    if a.strict && a.d < 2 {
        bail!("strict flags require --d >= 2");
    }
    let primes = parse_primes(&a.q)?;
    let ar = knit(&q).map_err(|e| anyhow!("{e}"))?;
    let eq = ExtQuiver::build(&q, a.d, a.strict).map_err(|e| anyhow!("{e}"))?;
    let mut budget = budget_from(a.max_nodes);
    let mut rng = qp_core::rng::SplitMix64::new(a.seed);
    let mut failures = 0u32;
    let mut unresolved = 0u32;

    // 1. Euler form equals the alternating Ext sum on random bound modules
    let fp = qp_core::field::Fp::new(primes[0]).ok_or_else(|| anyhow!("bad prime"))?;
    for _ in 0..a.samples {
        let t1 = qp_core::extended::random_bound_module(&eq, fp, &mut rng, 2);
        let t2 = qp_core::extended::random_bound_module(&eq, fp, &mut rng, 2);
        let (e0, e1, e2) = ext_profile(&eq, &fp, &t1, &t2);
        let euler = eq.euler_form_r(&t1.dim_vec(), &t2.dim_vec());
        if euler != e0 as i64 - e1 as i64 + e2 as i64 {
            failures += 1;
            eprintln!(
                "euler/ext mismatch: <{:?},{:?}> = {euler} vs {e0}-{e1}+{e2}",
                t1.dim_vec(),
                t2.dim_vec()
            );
        }
    }
    println!("euler-form/ext consistency: {} samples checked", a.samples);

    // 2. oracle equivalence and paving verification per indecomposable
    let mut paver = Paver::new(&ar, a.d, a.strict).map_err(|e| anyhow!("{e}"))?;
    for node in 0..ar.nodes.len() {
        let m = ar.nodes[node].rep.clone();
        for &p in &primes {
            let (fp, mp) = reduce_guarded(&q, &m, p)?;
            let t = phi(&eq, &fp, &mp);
            let table = count_submodules_all(&eq, fp, &t, &mut budget)?;
            for (f, &count) in &table {
                let chains = count_flags_directly(&q, fp, &mp, a.d, a.strict, f, &mut budget)?;
                if chains != count {
                    failures += 1;
                    eprintln!("oracle mismatch {:?} f={f:?} p={p}: {count} vs {chains}", ar.nodes[node].root);
                }
                match paver.pave(&m, f) {
                    Ok(cells) => {
                        if cells.eval(p) != count as u128 {
                            failures += 1;
                            eprintln!("paving mismatch {:?} f={f:?} p={p}", ar.nodes[node].root);
                        }
                    }
                    Err(e) => {
                        unresolved += 1;
                        eprintln!("unresolved {:?} f={f:?}: {}", ar.nodes[node].root, e.reason);
                    }
                }
            }
        }
        println!(
            "indecomposable {:?}: oracle + paving verified at q in {:?}",
            ar.nodes[node].root, primes
        );
    }
    if unresolved > 0 {
        println!("verification: {unresolved} unresolved pavings, {failures} mismatches");
        return Ok(EXIT_UNRESOLVED);
    }
    if failures > 0 {
        println!("verification: {failures} mismatches");
        return Ok(EXIT_MISMATCH);
    }
    println!("verification: all checks passed");
    Ok(0)
}
