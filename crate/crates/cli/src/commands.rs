use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use serde_json::{json, Value};

use mcturing_core::circuit::{
    build_cmux_tree, is_hazard_free, is_natural, parse_netlist, write_netlist, HazardCheck,
    HazardReport, NaturalnessReport, TernaryTable,
};
use mcturing_core::corpus::{self, corpus_file, corpus_list, CorpusKind};
use mcturing_core::machine::{
    is_oblivious_probe, parse_tm, simulate, simulate_traced, MachineRef, ObliviousnessReport,
    SimOutcome,
};
use mcturing_core::problems::{
    decide_detect1, decide_detect_poly_within, decide_tautology_bruteforce, machine_from_spec,
    parse_formula_file, reduce_bhp_to_pexp, reduce_pexp_to_detect1,
    reduce_tautology_to_detect_poly, Detect1Instance, DetectPolyInstance, InstanceBundle,
};
use mcturing_core::universal::{
    blowup_bench, growth_ratios, mc_universal_bounded_within, mc_universal_within, t_cmux,
    SelectionTape,
};
use mcturing_core::TritWord;

use crate::{CliError, Command, CorpusCommand, Ctx, Family, Reduction};

type CmdResult = Result<(), CliError>;

pub(crate) fn run(cmd: &Command, ctx: &mut Ctx<'_>) -> CmdResult {
    match cmd {
        Command::EvalCircuit { file, input, boolean } => eval_circuit(ctx, file, input, *boolean),
        Command::HazardCheck { file, samples } => hazard_check(ctx, file, *samples),
        Command::CheckNatural { file } => check_natural(ctx, file),
        Command::EmitCmux { levels } => emit_cmux(ctx, *levels),
        Command::Simulate { machine, input, budget, trace } => {
            simulate_cmd(ctx, machine, input, *budget, trace.is_some())
        }
        Command::ObliviousProbe { machine, len, samples, budget } => {
            oblivious_probe(ctx, machine, *len, *samples, *budget)
        }
        Command::ClosureSim { machine, input, budget, bounded } => {
            closure_sim(ctx, machine, input, *budget, *bounded)
        }
        Command::Cmux { select, data } => cmux(ctx, select, data),
        Command::BenchBlowup { family, n_min, n_max, csv, budget } => {
            bench_blowup(ctx, *family, *n_min, *n_max, csv.as_deref(), *budget)
        }
        Command::Detect1 { machine, input, bound } => detect1(ctx, machine, input, *bound),
        Command::DetectPoly { machine, input, exp } => detect_poly(ctx, machine, input, *exp),
        Command::Reduce(r) => reduce(ctx, r),
        Command::Tautology { file, via_reduction } => tautology(ctx, file, *via_reduction),
        Command::Corpus(c) => corpus_cmd(ctx, c),
        Command::Replay { .. } => unreachable!("handled by dispatch"),
    }
}

/// Reads a file, falling back to the bundled fixture of the same name.
fn load_text(path: &Path) -> anyhow::Result<String> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) => {
            let bundled = path
                .parent()
                .filter(|p| p.as_os_str().is_empty())
                .and_then(|_| path.to_str())
                .and_then(corpus_file);
            match bundled {
                Some(entry) => Ok(entry.contents.to_string()),
                None => Err(e).with_context(|| format!("cannot read {}", path.display())),
            }
        }
    }
}

/// A `.tm` file, a bundle `manifest.json`, or a bundled machine name.
fn load_machine(path: &Path) -> anyhow::Result<MachineRef> {
    let text = load_text(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let bundle: InstanceBundle = serde_json::from_str(&text)
            .with_context(|| format!("{} is not an instance bundle", path.display()))?;
        return Ok(machine_from_spec(&bundle.machine)?);
    }
    parse_tm(&text)
        .map(MachineRef::table)
        .with_context(|| format!("malformed machine {}", path.display()))
}

/// Trit words may be written with separating commas.
fn word(s: &str) -> anyhow::Result<TritWord> {
    let cleaned: String = s.chars().filter(|c| *c != ',').collect();
    cleaned
        .parse()
        .with_context(|| format!("bad trit word {s:?}"))
}

fn commas(w: &TritWord) -> String {
    w.iter().map(|t| t.as_char().to_string()).collect::<Vec<_>>().join(",")
}

fn emit_json(ctx: &mut Ctx<'_>, v: &Value) -> CmdResult {
    writeln!(ctx.out, "{}", serde_json::to_string(v)?)?;
    Ok(())
}

macro_rules! line {
    ($ctx:expr, $($arg:tt)*) => {
        writeln!($ctx.out, $($arg)*).map_err(CliError::from)
    };
}

fn eval_circuit(ctx: &mut Ctx<'_>, file: &Path, input: &str, boolean: bool) -> CmdResult {
    let c = parse_netlist(&load_text(file)?)?;
    let x = word(input)?;
    let y = if boolean { c.eval_boolean(&x)? } else { c.eval_kleene(&x)? };
    if ctx.json {
        emit_json(ctx, &json!({ "input": x.to_string(), "output": y.to_string() }))
    } else {
        line!(ctx, "{y}")
    }
}

fn hazard_check(ctx: &mut Ctx<'_>, file: &Path, samples: Option<usize>) -> CmdResult {
    let c = parse_netlist(&load_text(file)?)?;
    let mode = match samples {
        Some(samples) => HazardCheck::Sampled { samples, seed: ctx.seed },
        None => HazardCheck::Auto { samples: 10_000, seed: ctx.seed },
    };
    match is_hazard_free(&c, mode)? {
        HazardReport::HazardFree { checked, exhaustive } => {
            if ctx.json {
                emit_json(
                    ctx,
                    &json!({ "hazard_free": true, "checked": checked, "exhaustive": exhaustive }),
                )
            } else {
                let how = if exhaustive { "exhaustive" } else { "sampled" };
                line!(ctx, "hazard-free ({checked} inputs, {how})")
            }
        }
        HazardReport::Hazard { input, kleene, closure } => {
            if ctx.json {
                emit_json(
                    ctx,
                    &json!({
                        "hazard_free": false,
                        "input": input.to_string(),
                        "kleene": kleene.to_string(),
                        "closure": closure.to_string(),
                    }),
                )
            } else {
                line!(ctx, "hazard at {}: kleene {kleene}, closure {closure}", commas(&input))
            }
        }
    }
}

fn natural_json(r: &NaturalnessReport) -> Value {
    match r {
        NaturalnessReport::Natural => json!({ "natural": true }),
        NaturalnessReport::NotBooleanPreserving { input } => {
            json!({ "natural": false, "reason": "not_boolean_preserving", "input": input.to_string() })
        }
        NaturalnessReport::NotMonotone { lower, upper, f_lower, f_upper } => json!({
            "natural": false,
            "reason": "not_monotone",
            "lower": lower.to_string(),
            "upper": upper.to_string(),
            "f_lower": f_lower.to_string(),
            "f_upper": f_upper.to_string(),
        }),
    }
}

fn natural_line(r: &NaturalnessReport) -> String {
    match r {
        NaturalnessReport::Natural => "natural".into(),
        NaturalnessReport::NotBooleanPreserving { input } => {
            format!("not natural: stable input {input} maps to u")
        }
        NaturalnessReport::NotMonotone { lower, upper, f_lower, f_upper } => {
            format!("not natural: {lower} below {upper} but f = {f_lower} vs {f_upper}")
        }
    }
}

fn check_natural(ctx: &mut Ctx<'_>, file: &Path) -> CmdResult {
    let text = load_text(file)?;
    let tables = if file.extension().is_some_and(|e| e == "ckt") {
        let c = parse_netlist(&text)?;
        (0..c.n_outputs())
            .map(|i| TernaryTable::from_circuit(&c, i))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        vec![TernaryTable::parse(&text)?]
    };
    let reports: Vec<NaturalnessReport> = tables.iter().map(is_natural).collect();
    if ctx.json {
        let v: Vec<Value> = reports.iter().map(natural_json).collect();
        return emit_json(ctx, &Value::Array(v));
    }
    for (i, r) in reports.iter().enumerate() {
        if reports.len() > 1 {
            line!(ctx, "output {i}: {}", natural_line(r))?;
        } else {
            line!(ctx, "{}", natural_line(r))?;
        }
    }
    Ok(())
}

fn emit_cmux(ctx: &mut Ctx<'_>, levels: usize) -> CmdResult {
    let c = build_cmux_tree(levels)?;
    let netlist = write_netlist(&c);
    if ctx.json {
        emit_json(
            ctx,
            &json!({ "levels": levels, "size": c.size(), "depth": c.depth(), "netlist": netlist }),
        )
    } else {
        write!(ctx.out, "{netlist}")?;
        Ok(())
    }
}

fn simulate_cmd(ctx: &mut Ctx<'_>, machine: &Path, input: &str, budget: u64, trace: bool) -> CmdResult {
    let m = load_machine(machine)?;
    let x = word(input)?;
    if trace {
        let MachineRef::Table(tm) = &m else {
            return Err(anyhow!("traces are only available for table machines").into());
        };
        let (_, entries) = simulate_traced(tm, &x, budget);
        writeln!(ctx.out, "{}", serde_json::to_string(&entries)?)?;
        return Ok(());
    }
    let outcome = simulate(&m, &x, budget);
    if ctx.json {
        return emit_json(ctx, &serde_json::to_value(&outcome)?);
    }
    match outcome {
        SimOutcome::Halted { output, steps } => line!(ctx, "halted after {steps} steps: {output}"),
        SimOutcome::BudgetExhausted { steps } => line!(ctx, "no halt within {steps} steps"),
    }
}

fn oblivious_probe(ctx: &mut Ctx<'_>, machine: &Path, len: usize, samples: usize, budget: u64) -> CmdResult {
    let m = load_machine(machine)?;
    let report = is_oblivious_probe(&m, len, budget, samples, ctx.seed);
    if ctx.json {
        return emit_json(ctx, &serde_json::to_value(&report)?);
    }
    match report {
        ObliviousnessReport::ConsistentTrajectory(t) => {
            let heads: Vec<String> = t.iter().map(usize::to_string).collect();
            line!(ctx, "oblivious on {samples} samples: {}", heads.join(" "))
        }
        ObliviousnessReport::Witness { x1, x2, step } => {
            line!(ctx, "not oblivious: {x1} and {x2} diverge at step {step}")
        }
    }
}

fn closure_sim(ctx: &mut Ctx<'_>, machine: &Path, input: &str, budget: u64, bounded: bool) -> CmdResult {
    let m = load_machine(machine)?;
    let x = word(input)?;
    let (result, record) = if bounded {
        let (o, r) = mc_universal_bounded_within(&m, &x, budget, ctx.capacity)?;
        (o.to_string(), r)
    } else {
        let (t, r) = mc_universal_within(&m, &x, budget, ctx.capacity)?;
        (t.to_string(), r)
    };
    if ctx.json {
        emit_json(
            ctx,
            &json!({
                "result": result,
                "steps_total": record.total_steps,
                "steps_per_resolution": record.per_resolution_steps,
            }),
        )
    } else {
        line!(ctx, "{result}")
    }
}

fn cmux(ctx: &mut Ctx<'_>, select: &str, data: &str) -> CmdResult {
    let s = word(select)?;
    let mut tape = SelectionTape::new(word(data)?)?;
    let r = t_cmux(&mut tape, &s)?;
    if ctx.json {
        emit_json(
            ctx,
            &json!({
                "result": r.to_string(),
                "ops": tape.ops(),
                "cmux_applications": tape.cmux_applications(),
                "trajectory": tape.trajectory(),
            }),
        )
    } else {
        line!(ctx, "{r}")
    }
}

fn family_machine(f: Family) -> MachineRef {
    MachineRef::table(match f {
        Family::Parity => corpus::parity(),
        Family::And => corpus::and(),
        Family::Or => corpus::or(),
        Family::Majority => corpus::majority(),
        Family::Constant => corpus::accept_all(),
    })
}

fn bench_blowup(
    ctx: &mut Ctx<'_>,
    family: Family,
    n_min: usize,
    n_max: usize,
    csv_path: Option<&Path>,
    budget: u64,
) -> CmdResult {
    if n_min > n_max {
        return Err(CliError::Usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
    }
    let m = family_machine(family);
    let records = blowup_bench(|_| m.clone(), n_min..=n_max, budget, ctx.capacity)?;
    let ratios = growth_ratios(&records);
    let rows: Vec<(usize, u64, String)> = records
        .iter()
        .zip(&ratios)
        .map(|(r, q)| (r.n, r.total_steps, q.map(|q| format!("{q:.4}")).unwrap_or_default()))
        .collect();

    let to_csv = |w: &mut dyn std::io::Write| -> anyhow::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["n", "total_steps", "ratio_to_prev"])?;
        for (n, t, q) in &rows {
            wr.write_record([n.to_string(), t.to_string(), q.clone()])?;
        }
        wr.flush()?;
        Ok(())
    };

    if let Some(path) = csv_path {
        let mut file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        to_csv(&mut file)?;
        ctx.artifacts.push(path.to_path_buf());
    }
    if ctx.json {
        let v: Vec<Value> = records
            .iter()
            .zip(&ratios)
            .map(|(r, q)| json!({ "n": r.n, "total_steps": r.total_steps, "ratio_to_prev": q }))
            .collect();
        emit_json(ctx, &Value::Array(v))
    } else if csv_path.is_none() {
        to_csv(ctx.out)?;
        Ok(())
    } else {
        for (n, t, q) in &rows {
            line!(ctx, "n={n} total_steps={t} ratio_to_prev={q}")?;
        }
        Ok(())
    }
}

fn membership(ctx: &mut Ctx<'_>, member: bool, extra: Value) -> CmdResult {
    if ctx.json {
        let mut v = json!({ "member": member });
        if let (Value::Object(o), Value::Object(e)) = (&mut v, extra) {
            o.extend(e);
        }
        emit_json(ctx, &v)
    } else {
        line!(ctx, "{}", if member { "member" } else { "not a member" })
    }
}

fn detect1(ctx: &mut Ctx<'_>, machine: &Path, input: &str, bound: u64) -> CmdResult {
    let inst = Detect1Instance::new(load_machine(machine)?, word(input)?, bound)?;
    let member = decide_detect1(&inst)?;
    membership(ctx, member, json!({}))
}

fn detect_poly(ctx: &mut Ctx<'_>, machine: &Path, input: &str, exp: u32) -> CmdResult {
    let inst = DetectPolyInstance::new(load_machine(machine)?, word(input)?, exp)?;
    let member = decide_detect_poly_within(&inst, ctx.capacity)?;
    membership(ctx, member, json!({ "budget": inst.budget() }))
}

fn write_bundle(ctx: &mut Ctx<'_>, dir: &Path, bundle: InstanceBundle) -> CmdResult {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let manifest = dir.join("manifest.json");
    fs::write(&manifest, serde_json::to_string_pretty(&bundle)? + "\n")?;
    ctx.artifacts.push(manifest.clone());
    let mut written = vec![manifest];
    if let Some(dsl) = bundle.table_dsl() {
        let tm = dir.join("machine.tm");
        fs::write(&tm, dsl)?;
        ctx.artifacts.push(tm.clone());
        written.push(tm);
    }
    if ctx.json {
        let files: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
        emit_json(
            ctx,
            &json!({ "problem": bundle.problem, "x": bundle.x.to_string(), "bound": bundle.bound, "files": files }),
        )
    } else {
        line!(ctx, "{}: x = {}, bound = {}", bundle.problem, bundle.x, bundle.bound)?;
        for p in written {
            line!(ctx, "wrote {}", p.display())?;
        }
        Ok(())
    }
}

fn reduce(ctx: &mut Ctx<'_>, r: &Reduction) -> CmdResult {
    let bundle = match r {
        Reduction::PexpBhp { machine, input, bound, .. } => {
            let inst = reduce_bhp_to_pexp(&load_machine(machine)?, &word(input)?, *bound);
            InstanceBundle { problem: "pexp-bhp".into(), machine: inst.m.spec(), x: inst.x, bound: inst.k }
        }
        Reduction::Detect1 { machine, input, bound, .. } => {
            let inst = reduce_pexp_to_detect1(&load_machine(machine)?, &word(input)?, *bound)?;
            InstanceBundle { problem: "detect1".into(), machine: inst.m.spec(), x: inst.x, bound: inst.k }
        }
        Reduction::Tautology { file, index, .. } => {
            let formulas = parse_formula_file(&load_text(file)?)?;
            let tau = formulas
                .get(*index)
                .ok_or_else(|| anyhow!("{} has {} formulas, no index {index}", file.display(), formulas.len()))?;
            let inst = reduce_tautology_to_detect_poly(tau)?;
            InstanceBundle {
                problem: "detect-poly".into(),
                machine: inst.m.spec(),
                x: inst.x,
                bound: inst.c as u64,
            }
        }
    };
    let out = match r {
        Reduction::PexpBhp { out, .. } | Reduction::Detect1 { out, .. } | Reduction::Tautology { out, .. } => {
            &out.out
        }
    };
    write_bundle(ctx, out, bundle)
}

fn tautology(ctx: &mut Ctx<'_>, file: &Path, via_reduction: bool) -> CmdResult {
    let formulas = parse_formula_file(&load_text(file)?)?;
    let mut rows = Vec::new();
    for tau in &formulas {
        let direct = decide_tautology_bruteforce(tau)?;
        let mapped = if via_reduction {
            let inst = reduce_tautology_to_detect_poly(tau)?;
            Some(decide_detect_poly_within(&inst, ctx.capacity)?)
        } else {
            None
        };
        rows.push((tau.to_string(), direct, mapped));
    }
    if ctx.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(f, d, m)| match m {
                Some(m) => json!({ "formula": f, "tautology": d, "detect_poly": m }),
                None => json!({ "formula": f, "tautology": d }),
            })
            .collect();
        return emit_json(ctx, &Value::Array(v));
    }
    for (f, d, m) in rows {
        let verdict = if d { "tautology" } else { "not a tautology" };
        match m {
            Some(m) => line!(ctx, "{f}\t{verdict}\tdetect-poly {}", if m { "member" } else { "not a member" })?,
            None => line!(ctx, "{f}\t{verdict}")?,
        }
    }
    Ok(())
}

fn kind_name(k: CorpusKind) -> &'static str {
    match k {
        CorpusKind::Machine => "machine",
        CorpusKind::Circuit => "circuit",
        CorpusKind::Table => "table",
        CorpusKind::Formulas => "formulas",
    }
}

fn corpus_cmd(ctx: &mut Ctx<'_>, c: &CorpusCommand) -> CmdResult {
    match c {
        CorpusCommand::List => {
            if ctx.json {
                let v: Vec<Value> = corpus_list()
                    .iter()
                    .map(|e| json!({ "name": e.name, "kind": kind_name(e.kind) }))
                    .collect();
                return emit_json(ctx, &Value::Array(v));
            }
            for e in corpus_list() {
                line!(ctx, "{}\t{}", e.name, kind_name(e.kind))?;
            }
            Ok(())
        }
        CorpusCommand::Show { name } => {
            let e = corpus_file(name).ok_or_else(|| anyhow!("no bundled fixture named {name:?}"))?;
            if ctx.json {
                emit_json(ctx, &json!({ "name": e.name, "kind": kind_name(e.kind), "contents": e.contents }))
            } else {
                write!(ctx.out, "{}", e.contents)?;
                Ok(())
            }
        }
    }
}
