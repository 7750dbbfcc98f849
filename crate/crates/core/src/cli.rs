//! Command-line front end. Every command renders deterministic text or JSON.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::ambient::{AmbientModel, CoordSet, DEFAULT_BUDGET};
use crate::aut::projective::decomposition;
use crate::aut::{
    brute_force_proj_aut, comb_aut_order, incidence_geometry, inner_tree_stability_check, s_w_bruteforce, sw_params,
    SwCase,
};
use crate::class::{interpolate_class, ClassPolynomial};
use crate::error::Error;
use crate::field::{check_prime, first_primes};
use crate::graph::{parse_loose_graph, LooseGraph};
use crate::surgery::{
    affection_locality, graph_class, spanning_tree_independence, surgery_steps, ClassMethod, ComponentClass,
    SurgeryOptions,
};
use crate::zeta::{arithmetic_zeta, f1_zeta, tree_zeta};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_CONSISTENCY: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Class,
    Zeta,
    Count,
    Surgery,
    Verify,
    Aut,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "f1z", version, about = "Classes, zeta functions and automorphism groups of loose graphs")]
pub struct Cli {
    pub command: Command,
    /// Input graph in `.lg` format.
    pub file: PathBuf,
    /// Field size for `count` and `aut`.
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    /// Primes used for interpolation and verification, e.g. `2,3,5`.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Enumeration budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long)]
    pub json: bool,
    /// Include surgery traces.
    #[arg(long)]
    pub trace: bool,
    /// Render classes and zeta functions as LaTeX.
    #[arg(long)]
    pub latex: bool,
}

/// Outcome of a command: exit code and the text for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn with_code(code: i32, stdout: String, stderr: String) -> Self {
        Outcome { code, stdout, stderr }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_budget() {
        EXIT_BUDGET
    } else if e.is_consistency_failure() {
        EXIT_CONSISTENCY
    } else {
        EXIT_INPUT
    }
}

fn failure(e: Error) -> Outcome {
    Outcome::with_code(exit_code(&e), String::new(), format!("error: {e}\n"))
}

/// Parses arguments and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::with_code(code, String::new(), text)
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if cli.budget == 0 {
        return failure(Error::Precondition("budget must be positive".into()));
    }
    if let Some(p) = &cli.primes {
        if let Err(e) = check_primes(p) {
            return failure(e);
        }
    }
    let text = match std::fs::read_to_string(&cli.file) {
        Ok(t) => t,
        Err(e) => {
            return Outcome::with_code(EXIT_INPUT, String::new(), format!("error: {}: {e}\n", cli.file.display()))
        }
    };
    let g = match parse_loose_graph(&text) {
        Ok(g) => g,
        Err(e) => return failure(e),
    };
    let result = match cli.command {
        Command::Class => cmd_class(&g, cli),
        Command::Zeta => cmd_zeta(&g, cli),
        Command::Count => cmd_count(&g, cli),
        Command::Surgery => cmd_surgery(&g, cli),
        Command::Verify => cmd_verify(&g, cli),
        Command::Aut => cmd_aut(&g, cli),
    };
    result.unwrap_or_else(failure)
}

fn check_primes(p: &[u64]) -> crate::Result<()> {
    for &q in p {
        check_prime(q)?;
    }
    if p.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("primes must be distinct and increasing".into()));
    }
    if p.is_empty() {
        return Err(Error::Precondition("empty prime list".into()));
    }
    Ok(())
}

fn options(cli: &Cli) -> SurgeryOptions {
    SurgeryOptions { budget: cli.budget, primes: cli.primes.clone() }
}

fn render_class(p: &ClassPolynomial, cli: &Cli) -> String {
    if cli.latex {
        p.to_latex()
    } else {
        p.to_string()
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn describe(g: &LooseGraph) -> String {
    if g.vertex_count() == 0 {
        "free edge".into()
    } else {
        g.vertices().collect::<Vec<_>>().join(" ")
    }
}

fn method_name(m: ClassMethod) -> &'static str {
    match m {
        ClassMethod::Empty => "empty",
        ClassMethod::FreeEdge => "free-edge",
        ClassMethod::TreeFormula => "tree-formula",
        ClassMethod::Surgery => "surgery",
    }
}

fn write_trace(out: &mut String, c: &ComponentClass, cli: &Cli) {
    let Some(t) = &c.trace else {
        let _ = writeln!(out, "  no chords");
        return;
    };
    let tree: Vec<String> = t.tree_edges.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "  spanning tree: {}", tree.join(" "));
    let _ = writeln!(out, "  resolved tree class: {}", render_class(&t.tree_class, cli));
    for s in &t.steps {
        let _ = writeln!(out, "  re-attach {}: window [{}]", s.edge, s.window.join(" "));
        let _ = writeln!(out, "    delta {} -> {}", render_class(&s.delta, cli), render_class(&s.class_after, cli));
    }
}

fn component_json(c: &ComponentClass, with_trace: bool) -> serde_json::Value {
    let mut v = json!({
        "vertices": c.graph.vertices().collect::<Vec<_>>(),
        "free_edges": c.graph.free_edges().len(),
        "method": c.method,
        "class": c.class,
        "class_text": c.class.to_string(),
    });
    if with_trace {
        v["trace"] = serde_json::to_value(&c.trace).expect("serializable");
    }
    v
}

fn cmd_class(g: &LooseGraph, cli: &Cli) -> crate::Result<Outcome> {
    let (total, comps) = graph_class(g, &options(cli))?;
    if cli.json {
        let comps: Vec<_> = comps.iter().map(|c| component_json(c, cli.trace)).collect();
        return Ok(Outcome::ok(to_json(&json!({
            "command": "class",
            "class": total,
            "class_text": total.to_string(),
            "components": comps,
        }))));
    }
    let mut out = format!("{}\n", render_class(&total, cli));
    if comps.len() > 1 || cli.trace {
        for (i, c) in comps.iter().enumerate() {
            let _ = writeln!(
                out,
                "component {} ({}) [{}]: {}",
                i + 1,
                describe(&c.graph),
                method_name(c.method),
                render_class(&c.class, cli)
            );
            if cli.trace {
                write_trace(&mut out, c, cli);
            }
        }
    }
    Ok(Outcome::ok(out))
}

fn cmd_zeta(g: &LooseGraph, cli: &Cli) -> crate::Result<Outcome> {
    let (total, _) = graph_class(g, &options(cli))?;
    let z = f1_zeta(&total);
    if g.is_loose_tree() {
        let closed = tree_zeta(g)?;
        if closed != z {
            return Ok(Outcome::with_code(
                EXIT_CONSISTENCY,
                String::new(),
                format!(
                    "error: closed-form tree zeta {} disagrees with {}\n",
                    closed.render_fraction(),
                    z.render_fraction()
                ),
            ));
        }
    }
    let a = arithmetic_zeta(&total);
    if cli.json {
        return Ok(Outcome::ok(to_json(&json!({
            "command": "zeta",
            "class": total,
            "f1_zeta": z,
            "f1_zeta_text": z.render_fraction(),
            "arithmetic_zeta": a,
            "arithmetic_zeta_text": a.render_riemann(),
        }))));
    }
    let main = if cli.latex { z.render_latex() } else { z.render_fraction() };
    Ok(Outcome::ok(format!("{main}\narithmetic: {}\n", a.render_riemann())))
}

fn cmd_count(g: &LooseGraph, cli: &Cli) -> crate::Result<Outcome> {
    let model = AmbientModel::build(g)?;
    let count = model.count_points(cli.q, cli.budget)?;
    if cli.json {
        return Ok(Outcome::ok(to_json(&json!({ "command": "count", "q": cli.q, "count": count }))));
    }
    Ok(Outcome::ok(format!("{count}\n")))
}

fn cmd_surgery(g: &LooseGraph, cli: &Cli) -> crate::Result<Outcome> {
    let (total, comps) = graph_class(g, &options(cli))?;
    if cli.json {
        let comps: Vec<_> = comps.iter().map(|c| component_json(c, true)).collect();
        return Ok(Outcome::ok(to_json(&json!({
            "command": "surgery",
            "class": total,
            "class_text": total.to_string(),
            "components": comps,
        }))));
    }
    let mut out = String::new();
    for (i, c) in comps.iter().enumerate() {
        let _ = writeln!(out, "component {} ({}) [{}]", i + 1, describe(&c.graph), method_name(c.method));
        write_trace(&mut out, c, cli);
        let _ = writeln!(out, "  class: {}", render_class(&c.class, cli));
    }
    let _ = writeln!(out, "total: {}", render_class(&total, cli));
    Ok(Outcome::ok(out))
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    status: &'static str,
    detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        Check { name, status: if pass { "pass" } else { "FAIL" }, detail }
    }

    fn vacuous(name: &'static str, detail: String) -> Self {
        Check { name, status: "vacuous", detail }
    }
}

fn cmd_verify(g: &LooseGraph, cli: &Cli) -> crate::Result<Outcome> {
    let opts = options(cli);
    let model = AmbientModel::build(g)?;
    let (total, comps) = graph_class(g, &opts)?;
    let degree = total.degree().unwrap_or(0) as usize;
    let primes = cli.primes.clone().unwrap_or_else(|| first_primes(degree + 2));
    let mut checks = Vec::new();

    let mut samples = Vec::new();
    let mut mismatches = Vec::new();
    for &q in &primes {
        let count = model.count_in_window_auto(CoordSet::full(model.dim()), q, cli.budget)?;
        let predicted = total.checked_evaluate(q as i128)?;
        if predicted != count as i128 {
            mismatches.push(format!("q = {q}: class gives {predicted}, count is {count}"));
        }
        samples.push((q as i128, count as i128));
    }
    let listed = primes.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let detail = if mismatches.is_empty() { format!("q = {listed}") } else { mismatches.join("; ") };
    checks.push(Check::new("oracle", mismatches.is_empty(), detail));

    let f1_type = if samples.len() >= 2 {
        match interpolate_class(&samples, samples.len() - 2) {
            Ok(p) if p == total => Check::new("f1-type", true, format!("{} samples, one held out", samples.len())),
            Ok(p) => Check::new("f1-type", false, format!("counts interpolate to {p}")),
            Err(e) if e.is_consistency_failure() => Check::new("f1-type", false, e.to_string()),
            Err(e) => return Err(e),
        }
    } else {
        Check::vacuous("f1-type", "need at least two primes".into())
    };
    checks.push(f1_type);

    let mut steps = 0;
    let mut failures = Vec::new();
    for c in comps.iter().filter(|c| c.method == ClassMethod::Surgery) {
        let selection = c.graph.spanning_loose_tree()?;
        for (with, edge) in surgery_steps(&c.graph, &selection.chords)? {
            steps += 1;
            for q in [2, 3] {
                let l = affection_locality(&with, &edge, q, cli.budget)?;
                if !l.holds() {
                    failures.push(format!(
                        "{edge} at q = {q}: global {} vs window {}",
                        l.global_difference, l.window_difference
                    ));
                }
            }
        }
    }
    checks.push(if steps == 0 {
        Check::vacuous("locality", "no chords".into())
    } else if failures.is_empty() {
        Check::new("locality", true, format!("resolution steps: {steps}, q = 2, 3"))
    } else {
        Check::new("locality", false, failures.join("; "))
    });

    let mut trees = 0;
    let mut runs = 0;
    let mut independent = true;
    let mut any_chords = false;
    for c in comps.iter().filter(|c| c.graph.vertex_count() > 0) {
        let report = spanning_tree_independence(&c.graph, &opts)?;
        trees += report.spanning_trees;
        runs += report.surgeries;
        independent &= report.independent();
        any_chords |= !report.vacuous();
    }
    checks.push(if !any_chords {
        Check::vacuous("independence", "each component has a single spanning tree and no chords".into())
    } else {
        Check::new("independence", independent, format!("{trees} spanning trees, {runs} surgeries"))
    });

    let vertices: Vec<&str> = g.vertices().collect();
    let mut adjacency_ok = true;
    for (i, u) in vertices.iter().enumerate() {
        for v in &vertices[i + 1..] {
            adjacency_ok &= g.has_edge(u, v) == model.local_intersection_nonempty(u, v, 2)?;
        }
    }
    checks.push(Check::new("adjacency", adjacency_ok, "local intersections at q = 2".into()));
    let (graph_comps, model_comps) = (g.components().len(), model.piece_components());
    checks.push(Check::new(
        "components",
        graph_comps == model_comps,
        format!("graph {graph_comps}, point model {model_comps}"),
    ));

    let all_pass = checks.iter().all(|c| c.status != "FAIL");
    let code = if all_pass { EXIT_OK } else { EXIT_CONSISTENCY };
    let stdout = if cli.json {
        to_json(
            &json!({ "command": "verify", "class": total, "class_text": total.to_string(), "checks": checks, "pass": all_pass }),
        )
    } else {
        let mut out = format!("class: {}\n", render_class(&total, cli));
        for c in &checks {
            let _ = writeln!(out, "{}: {} ({})", c.name, c.status, c.detail);
        }
        out
    };
    Ok(Outcome::with_code(code, stdout, String::new()))
}

fn cmd_aut(g: &LooseGraph, cli: &Cli) -> crate::Result<Outcome> {
    if !g.is_connected() || !g.is_loose_tree() || g.vertex_count() == 0 {
        let reason = "input is not a connected loose tree; the structural automorphism checks cover loose trees only";
        let stdout = if cli.json {
            to_json(&json!({ "command": "aut", "skipped": reason }))
        } else {
            format!("automorphism check skipped: {reason}\n")
        };
        return Ok(Outcome::ok(stdout));
    }
    let q = cli.q;
    check_prime(q)?;
    let model = AmbientModel::build(g)?;
    let proj = brute_force_proj_aut(&model, q, cli.budget)?;
    let comb = comb_aut_order(&incidence_geometry(&model, q, cli.budget)?, cli.budget)?;
    let inner = g.boundary_and_inner()?.inner;
    let mut lines = vec![
        format!("q: {q}"),
        format!("coordinates: {}", proj.coordinates.join(" ")),
        format!("projective order: {}", proj.order),
        format!("combinatorial order: {comb}"),
        format!("inner vertices: {}", inner.join(" ")),
    ];
    let mut sw = Vec::new();
    for w in &inner {
        let params = sw_params(g, w)?;
        let report = s_w_bruteforce(&model, w, q, cli.budget)?;
        let case = match params.case {
            SwCase::Dagger => "dagger",
            SwCase::DoubleDagger => "double-dagger",
        };
        lines.push(format!(
            "S({w}): order {} (case {case}, e = {}, l = {}, i = {})",
            report.order, params.e, params.l, params.i
        ));
        sw.push(json!({ "vertex": w, "params": params, "group": report }));
    }
    let mut code = EXIT_OK;
    let mut structure = serde_json::Value::Null;
    if inner.len() >= 2 {
        let d = decomposition(g, q, cli.budget)?;
        let stable = inner_tree_stability_check(g, q, cli.budget)?;
        if d.holds {
            lines.push("decomposition: verified".into());
        } else {
            lines.push(format!(
                "decomposition: FAILED (generated subgroup has order {} of {})",
                d.generated_order, d.proj_order
            ));
            code = EXIT_CONSISTENCY;
        }
        lines.push(format!("inner tree stability: {}", if stable { "verified" } else { "FAILED" }));
        if !stable {
            code = EXIT_CONSISTENCY;
        }
        if comb != proj.order {
            lines.push(format!("combinatorial = projective: FAILED ({comb} vs {})", proj.order));
            code = EXIT_CONSISTENCY;
        }
        structure = json!({ "decomposition": d, "inner_tree_stable": stable });
    } else {
        lines.push(format!("decomposition: skipped (|I| = {})", inner.len()));
    }
    let stdout = if cli.json {
        to_json(&json!({
            "command": "aut",
            "projective": proj,
            "combinatorial_order": comb,
            "inner_vertices": inner,
            "s_w": sw,
            "structure": structure,
        }))
    } else {
        let mut s = lines.join("\n");
        s.push('\n');
        if cli.trace {
            for (i, gmat) in proj.generators.iter().enumerate() {
                let rows: Vec<String> =
                    gmat.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect();
                let _ = writeln!(s, "generator {}: [{}]", i + 1, rows.join("; "));
            }
        }
        s
    };
    Ok(Outcome::with_code(code, stdout, String::new()))
}
