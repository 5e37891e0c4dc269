use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use splitnet_core::dynamics::{check_parametrization, parse_parametrization, translation_equivalent};
use splitnet_core::json::{translation_to_json, GcrnJson};
use splitnet_core::translation::{
    encode, find_wr_split_translation, prune_self_loops, summarize, verify_split_translation, DisplayEdge,
    EncodingParams, Engine, QRecord, QStatus, SearchConfig, SearchError, SplitTranslation, TranslationSummary,
    VerifyReport,
};
use splitnet_core::{analyze, GeneralizedNetwork, ReactionNetwork, StructuralReport};
use splitnet_milp::{export_lp_string, Rational, VarKind};

use crate::input::{self, AnyNetwork};
use crate::{
    Cli, CliError, Command, EncodingArgs, EngineArg, SliceArgs, EXIT_INPUT, EXIT_NEGATIVE, EXIT_NODE_LIMIT,
    EXIT_NOT_FOUND, EXIT_OK, SOLVER_ENV,
};

const DEFAULT_MAX_SLICES: usize = 3;

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Analyze { file } => cmd_analyze(file, json),
        Command::Translate { file, slices, enc, emit_lp, output, node_limit, engine, solver } => {
            let qs = slice_counts(slices)?;
            check_encoding_flags(enc)?;
            let engine = engine_of(*engine, solver.as_deref())?;
            let cfg = SearchConfig { engine, node_limit: *node_limit, ..SearchConfig::default() };
            cmd_translate(file, &qs, enc, &cfg, emit_lp.as_deref(), output.as_deref(), json)
        }
        Command::Verify { original, translation } => cmd_verify(original, translation, json),
        Command::Equiv { original, translation } => cmd_equiv(original, translation, json),
        Command::CheckParam { network, parametrization } => cmd_check_param(network, parametrization, json),
        Command::ExportLp { file, slices, enc, output } => {
            if *slices == 0 {
                return Err(CliError::Input("--slices must be at least 1".into()));
            }
            check_encoding_flags(enc)?;
            cmd_export_lp(file, *slices, enc, output.as_deref(), json)
        }
    }
}

fn slice_counts(s: &SliceArgs) -> Result<Vec<usize>, CliError> {
    let qs: Vec<usize> = match (s.slices, s.max_slices) {
        (Some(q), _) => vec![q],
        (None, Some(m)) => (1..=m).collect(),
        (None, None) => (1..=DEFAULT_MAX_SLICES).collect(),
    };
    if qs.is_empty() || qs.contains(&0) {
        return Err(CliError::Input("slice count must be at least 1".into()));
    }
    Ok(qs)
}

fn check_encoding_flags(enc: &EncodingArgs) -> Result<(), CliError> {
    if !enc.epsilon.is_positive() {
        return Err(CliError::Input("--epsilon must be positive".into()));
    }
    if !enc.big_m.is_positive() {
        return Err(CliError::Input("--big-m must be positive".into()));
    }
    if enc.vertices == Some(0) {
        return Err(CliError::Input("--vertices must be at least 1".into()));
    }
    Ok(())
}

fn engine_of(e: EngineArg, solver: Option<&Path>) -> Result<Engine, CliError> {
    Ok(match e {
        EngineArg::Structured => Engine::Structured,
        EngineArg::Generic => Engine::Generic,
        EngineArg::External => {
            let exe = solver
                .map(Path::to_path_buf)
                .or_else(|| std::env::var_os(SOLVER_ENV).map(PathBuf::from))
                .ok_or_else(|| CliError::Input(format!("engine `external` needs --solver or ${SOLVER_ENV}")))?;
            Engine::External(exe)
        }
    })
}

fn params(net: &ReactionNetwork, q: usize, enc: &EncodingArgs) -> EncodingParams {
    let mut p = EncodingParams::for_network(net, q);
    if let Some(n) = enc.vertices {
        p.n_vertices = n;
    }
    p.big_m = enc.big_m.clone();
    p.epsilon = enc.epsilon.clone();
    p.integral_complexes = enc.integral;
    p.symmetry_breaking = !enc.no_symmetry_breaking;
    p
}

fn print_json<T: Serialize>(v: &T) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).map_err(|e| CliError::Internal(e.to_string()))?;
    // A closed pipe (`| head`) is not an error of ours.
    let _ = writeln!(std::io::stdout().lock(), "{s}");
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classes(cs: &[Vec<usize>], names: &[String]) -> String {
    let parts: Vec<String> = cs
        .iter()
        .map(|c| {
            let v: Vec<&str> = c.iter().map(|&i| names[i - 1].as_str()).collect();
            format!("{{{}}}", v.join(", "))
        })
        .collect();
    parts.join(" ")
}

fn structure_text(r: &StructuralReport, names: &[String]) -> String {
    let mut s = String::new();
    let rows = [
        ("vertices (n)", r.n.to_string()),
        ("reactions", r.r.to_string()),
        ("linkage classes (l)", r.l.to_string()),
        ("dim S", r.dim_s.to_string()),
        ("dim S'", r.dim_s_prime.to_string()),
        ("deficiency", r.delta.to_string()),
        ("kinetic-order deficiency", r.delta_prime.to_string()),
        ("weakly reversible", yes_no(r.weakly_reversible).to_string()),
    ];
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<26}{v}");
    }
    let _ = writeln!(s, "linkage classes: {}", classes(&r.linkage_classes, names));
    let _ = write!(s, "strong linkage classes: {}", classes(&r.strong_linkage_classes, names));
    s
}

fn cmd_analyze(file: &Path, json: bool) -> Result<u8, CliError> {
    let g = match input::any_network(file)? {
        AnyNetwork::Plain(n) => n.to_generalized(),
        AnyNetwork::Generalized(g) => g,
    };
    let r = analyze(&g);
    if json {
        print_json(&r)?;
    } else {
        println!("{}", structure_text(&r, &g.vertex_names));
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TranslateReport<'a> {
    status: &'static str,
    records: &'a [QRecord],
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<FoundReport>,
}

#[derive(Serialize)]
struct FoundReport {
    q: usize,
    objective: Rational,
    #[serde(rename = "bigM")]
    big_m: Rational,
    #[serde(rename = "nVertices")]
    n_vertices: usize,
    structure: StructuralReport,
    verified: bool,
    equivalent: bool,
    summary: TranslationSummary,
    translation: GcrnJson,
}

fn search_error(e: SearchError) -> CliError {
    match e {
        SearchError::Param(p) => CliError::Input(p.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn lp_path(base: &Path, q: usize, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = base.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "lp".into());
    base.with_file_name(format!("{stem}-q{q}.{ext}"))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn cmd_translate(
    file: &Path,
    qs: &[usize],
    enc: &EncodingArgs,
    cfg: &SearchConfig,
    emit_lp: Option<&Path>,
    output: Option<&Path>,
    json: bool,
) -> Result<u8, CliError> {
    let net = input::network(file)?;
    for &q in qs {
        params(&net, q, enc).validate(&net).map_err(|e| CliError::Input(e.to_string()))?;
    }
    if let Some(base) = emit_lp {
        // The models as first posed; big-M retries are not re-emitted.
        for &q in qs {
            let model = encode(&net, &params(&net, q, enc)).map_err(|e| CliError::Input(e.to_string()))?.model;
            write_file(&lp_path(base, q, qs.len() > 1), &export_lp_string(&model))?;
        }
    }
    let out = find_wr_split_translation(&net, qs, &params(&net, qs[0], enc), cfg).map_err(search_error)?;
    for r in &out.records {
        log::info!("q = {}: {:?} after {} nodes", r.q, r.status, r.nodes);
    }

    let (status, code) = match (&out.found, out.hit_node_limit()) {
        (Some(_), _) => ("found", EXIT_OK),
        (None, true) => ("node-limit", EXIT_NODE_LIMIT),
        (None, false) => ("not-found", EXIT_NOT_FOUND),
    };
    let mut found_text = None;
    let result = match &out.found {
        None => None,
        Some(f) => {
            let t = &f.translation;
            let verification = verify_split_translation(&net, t);
            let equivalent = translation_equivalent(&net, &t.network)
                .map_err(|e| CliError::Internal(e.to_string()))?
                .equivalent;
            if !verification.ok || !equivalent {
                return Err(CliError::Internal(format!(
                    "decoded translation failed its own checks: {:?}",
                    verification.violations
                )));
            }
            let translation = translation_to_json(t);
            if let Some(path) = output {
                let s = serde_json::to_string_pretty(&translation).map_err(|e| CliError::Internal(e.to_string()))?;
                write_file(path, &(s + "\n"))?;
            }
            let rep = FoundReport {
                q: f.q,
                objective: f.objective.clone(),
                big_m: f.params.big_m.clone(),
                n_vertices: f.params.n_vertices,
                structure: analyze(&t.network),
                verified: verification.ok,
                equivalent,
                summary: summarize(t),
                translation,
            };
            found_text = Some(translation_text(&rep, t));
            Some(rep)
        }
    };
    if json {
        print_json(&TranslateReport { status, records: &out.records, result })?;
    } else {
        for r in &out.records {
            let what = match r.status {
                QStatus::Found => format!("found, objective {}", r.objective.as_deref().unwrap_or("?")),
                QStatus::Infeasible => "infeasible".into(),
                QStatus::NodeLimit => "node limit reached".into(),
            };
            println!("q = {}: {what} (vertex budget {}, big-M {}, {} nodes)", r.q, r.n_vertices, r.big_m, r.nodes);
        }
        match found_text {
            Some(s) => print!("\n{s}"),
            None => println!("no weakly reversible split translation within the budget"),
        }
    }
    Ok(code)
}

fn edge_lines(s: &mut String, edges: &[DisplayEdge], names: &[String]) {
    for e in edges {
        let mult = if e.multiplicity > e.labels.len() { format!(" (x{})", e.multiplicity) } else { String::new() };
        let _ = writeln!(s, "  {} -> {}  {}{mult}", names[e.source - 1], names[e.target - 1], e.label_text());
    }
}

/// Text view: vertices, then the arrows without self-loops.
fn translation_text(rep: &FoundReport, t: &SplitTranslation) -> String {
    let g: &GeneralizedNetwork = &t.network;
    let r = &rep.structure;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "split translation: {} slice(s), {} vertices, objective {}",
        rep.q, r.n, rep.objective
    );
    let _ = writeln!(
        s,
        "deficiency {}, kinetic-order deficiency {}, weakly reversible: {}",
        r.delta,
        r.delta_prime,
        yes_no(r.weakly_reversible)
    );
    let _ = writeln!(s, "conditions (a)-(d): pass; dynamically equivalent: yes");
    let _ = writeln!(s, "\nvertices (stoichiometric | kinetic-order):");
    for (j, name) in g.vertex_names.iter().enumerate() {
        let _ = writeln!(s, "  {name}: {} | {}", g.stoich[j].display(&g.species), g.kinetic[j].display(&g.species));
    }
    let view = prune_self_loops(t);
    let _ = writeln!(s, "\nreactions:");
    edge_lines(&mut s, &view.combined, &g.vertex_names);
    if t.q > 1 {
        for (l, sl) in view.slices.iter().enumerate() {
            let _ = writeln!(s, "slice {}:", l + 1);
            edge_lines(&mut s, sl, &g.vertex_names);
        }
    }
    s
}

fn cmd_verify(original: &Path, translation: &Path, json: bool) -> Result<u8, CliError> {
    let net = input::network(original)?;
    let t = input::translation(&net, translation)?;
    let rep: VerifyReport = verify_split_translation(&net, &t);
    if json {
        print_json(&rep)?;
    } else {
        for p in &rep.shape {
            println!("shape: {p}");
        }
        let c = rep.conditions;
        for (name, ok) in [('a', c.a), ('b', c.b), ('c', c.c), ('d', c.d)] {
            println!("({name}) {}", if ok { "pass" } else { "FAIL" });
            for v in rep.violations.iter().filter(|v| v.condition == name) {
                println!("    {}: {}", v.reaction, v.detail);
            }
        }
        if !rep.target_only.is_empty() {
            let names: Vec<&str> = rep.target_only.iter().map(|&v| t.network.vertex_names[v - 1].as_str()).collect();
            println!("target-only vertices (kinetic order unconstrained): {}", names.join(", "));
        }
    }
    Ok(if !rep.shape.is_empty() {
        EXIT_INPUT
    } else if rep.ok {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_equiv(original: &Path, translation: &Path, json: bool) -> Result<u8, CliError> {
    let net = input::network(original)?;
    let g = input::generalized(translation)?;
    let rep = translation_equivalent(&net, &g).map_err(|e| CliError::Input(e.to_string()))?;
    if json {
        print_json(&rep)?;
    } else if let Some(d) = rep.differences.first() {
        println!("not equivalent");
        println!("d{}/dt differs by: {}", d.species, d.difference);
    } else {
        println!("equivalent");
    }
    Ok(if rep.equivalent { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_check_param(network: &Path, param: &Path, json: bool) -> Result<u8, CliError> {
    let net = input::network(network)?;
    let text = input::read(param)?;
    let p = parse_parametrization(&text, &net).map_err(|e| CliError::Input(format!("{}: {e}", param.display())))?;
    let rep = check_parametrization(&net, &p).map_err(|e| CliError::Input(e.to_string()))?;
    if json {
        print_json(&rep)?;
    } else if rep.ok {
        println!("pass: every residual numerator is identically zero");
    } else {
        println!("fail");
        for r in &rep.residuals {
            println!("  {}: {}", r.species, r.difference);
        }
    }
    Ok(if rep.ok { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct ExportReport {
    path: String,
    variables: usize,
    binaries: usize,
    constraints: usize,
}

fn cmd_export_lp(file: &Path, q: usize, enc: &EncodingArgs, output: Option<&Path>, json: bool) -> Result<u8, CliError> {
    let net = input::network(file)?;
    let model = encode(&net, &params(&net, q, enc)).map_err(|e| CliError::Input(e.to_string()))?.model;
    let text = export_lp_string(&model);
    match output {
        None => print!("{text}"),
        Some(path) => {
            write_file(path, &text)?;
            let rep = ExportReport {
                path: path.display().to_string(),
                variables: model.num_vars(),
                binaries: model.count_kind(VarKind::Binary),
                constraints: model.constraints().len(),
            };
            if json {
                print_json(&rep)?;
            } else {
                println!(
                    "wrote {} ({} variables, {} binary, {} constraints)",
                    rep.path, rep.variables, rep.binaries, rep.constraints
                );
            }
        }
    }
    Ok(EXIT_OK)
}
