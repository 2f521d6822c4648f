//! Commands behind the `gptlab` binary. Each command returns a [`Report`]
//! holding a human-readable summary and a JSON block that [`recheck`] can
//! verify again from the input files alone.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use gptlab::contextual::{check_ce_with, is_probability_weight, Hypergraph, ProbabilityWeight};
use gptlab::deciders::{Decider, DeciderError, EffectMode, Witness};
use gptlab::gpt::{pair, Effect, GptSystem};
use gptlab::nonlocal::{check_lo_with, is_no_signalling, locally_orthogonal, Behavior, Event};
use gptlab::numerics::{Certainty, Scalar, Sign};
use gptlab::zoo;

/// Marker line between the human summary and the machine block.
pub const MACHINE_MARKER: &str = "--- machine ---";

/// Largest product graph built without an explicit override.
pub const DEFAULT_MAX_VERTICES: usize = 1_000_000;

/// Highest hierarchy level run without `--allow-high-level`.
pub const DEFAULT_MAX_LEVEL: usize = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Check(String),
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input { path: path.to_path_buf(), message: e.to_string() }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn load_behavior(path: &Path) -> Result<Behavior, CliError> {
    Behavior::from_json(&read(path)?).map_err(|e| input_error(path, e))
}

pub fn load_hypergraph(path: &Path) -> Result<Hypergraph, CliError> {
    Hypergraph::from_json(&read(path)?).map_err(|e| input_error(path, e))
}

pub fn load_weight(h: &Hypergraph, path: &Path) -> Result<ProbabilityWeight, CliError> {
    let text = read(path)?;
    ProbabilityWeight::from_json(h, &text).map_err(|e| {
        let mut message = e.to_string();
        if let Some(edge) = failing_edge(h, &text) {
            let _ = write!(message, " (edge {{{}}})", edge.join(", "));
        }
        input_error(path, message)
    })
}

/// Labels of the first hyperedge whose values do not sum to one.
fn failing_edge(h: &Hypergraph, text: &str) -> Option<Vec<String>> {
    let map: std::collections::BTreeMap<String, String> = serde_json::from_str(text).ok()?;
    let w: Vec<Scalar> =
        h.vertices().iter().map(|v| map.get(v).and_then(|t| Scalar::parse_token(t).ok())).collect::<Option<_>>()?;
    match is_probability_weight(&w, h).witness? {
        gptlab::contextual::WeightViolation::EdgeSum { edge, .. } => {
            Some(h.edges()[edge].iter().map(|&v| h.vertices()[v].clone()).collect())
        }
        gptlab::contextual::WeightViolation::OutOfRange { vertex, .. } => Some(vec![h.vertices()[vertex].clone()]),
    }
}

pub fn load_system(path: &Path) -> Result<GptSystem, CliError> {
    GptSystem::from_json(&read(path)?).map_err(|e| input_error(path, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Satisfied,
    Violated,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Satisfied => 0,
            Outcome::Violated => 2,
        }
    }

    fn from_holds(holds: bool) -> Self {
        if holds {
            Outcome::Satisfied
        } else {
            Outcome::Violated
        }
    }

    fn label(self) -> &'static str {
        match self {
            Outcome::Satisfied => "satisfied",
            Outcome::Violated => "violated",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub human: String,
    pub machine: Value,
    pub outcome: Outcome,
}

impl Report {
    pub fn render(&self) -> String {
        let block = serde_json::to_string_pretty(&self.machine).expect("report serializes");
        format!("{}\n{MACHINE_MARKER}\n{block}\n", self.human.trim_end())
    }
}

/// Extracts the machine block from rendered output.
pub fn parse_machine_block(output: &str) -> Result<Value, CliError> {
    let (_, block) =
        output.split_once(MACHINE_MARKER).ok_or_else(|| CliError::Check("no machine block in output".into()))?;
    serde_json::from_str(block.trim()).map_err(|e| CliError::Check(format!("machine block: {e}")))
}

fn certainty_name(c: Certainty) -> &'static str {
    match c {
        Certainty::Exact => "exact",
        Certainty::CertifiedWithinPrecision => "certified within precision",
    }
}

/// Absolute form of an input path, so the machine block can be rechecked
/// from any directory.
fn path_text(path: &Path) -> String {
    std::fs::canonicalize(path).unwrap_or_else(|_| path.to_path_buf()).display().to_string()
}

/// Level and vertex caps shared by the hierarchy commands.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_vertices: usize,
    pub allow_high_level: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vertices: DEFAULT_MAX_VERTICES, allow_high_level: false }
    }
}

fn check_level(level: usize, limits: Limits) -> Result<(), CliError> {
    if level == 0 {
        return Err(CliError::Usage("--level must be at least 1".into()));
    }
    if level > DEFAULT_MAX_LEVEL && !limits.allow_high_level {
        return Err(CliError::Usage(format!(
            "level {level} is above {DEFAULT_MAX_LEVEL}; pass --allow-high-level to run it"
        )));
    }
    Ok(())
}

pub fn check_lo(path: &Path, level: usize, limits: Limits) -> Result<Report, CliError> {
    check_level(level, limits)?;
    let b = load_behavior(path)?;
    let mut human = String::new();
    let mut levels = Vec::new();
    let mut violated = false;
    for k in 1..=level {
        // once a level is violated every higher one is too; stop at the first witness
        let r = check_lo_with(&b, k, limits.max_vertices, violated).map_err(|e| CliError::Usage(e.to_string()))?;
        let lower_bound = violated;
        let bound = if lower_bound { "at least " } else { "" };
        let _ = writeln!(
            human,
            "LO level {k}: {} (max clique value {bound}{}, {}, {} vertices)",
            Outcome::from_holds(r.satisfied).label(),
            r.max_clique_value,
            certainty_name(r.certainty),
            r.vertices
        );
        if !r.satisfied {
            let _ = writeln!(human, "  witness clique ({} members):", r.witness.len());
            for member in &r.witness {
                let p = member_weight(&b, member);
                let _ = writeln!(
                    human,
                    "    {}  p = {p}",
                    member.iter().map(Event::to_string).collect::<Vec<_>>().join(" ; ")
                );
            }
        }
        violated |= !r.satisfied;
        levels.push(json!({
            "level": k,
            "satisfied": r.satisfied,
            "value": r.max_clique_value.to_token(),
            "lower_bound": lower_bound,
            "certainty": r.certainty,
            "vertices": r.vertices,
            "witness": r.witness.iter().map(|m| m.iter().map(Event::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }));
    }
    let outcome = Outcome::from_holds(!violated);
    let machine = json!({
        "command": "check-lo",
        "behavior": path_text(path),
        "level": level,
        "max_vertices": limits.max_vertices,
        "outcome": outcome.label(),
        "levels": levels,
    });
    Ok(Report { human, machine, outcome })
}

fn member_weight(b: &Behavior, member: &[Event]) -> Scalar {
    member.iter().fold(Scalar::one(), |acc, e| &acc * b.prob(&e.inputs, &e.outputs))
}

pub fn check_ce(hypergraph: &Path, weights: &Path, level: usize, limits: Limits) -> Result<Report, CliError> {
    check_level(level, limits)?;
    let h = load_hypergraph(hypergraph)?;
    let w = load_weight(&h, weights)?;
    let labels = h.vertices();
    let mut human = String::new();
    let mut levels = Vec::new();
    let mut violated = false;
    for k in 1..=level {
        let r = check_ce_with(&w, k, limits.max_vertices, violated).map_err(|e| CliError::Usage(e.to_string()))?;
        let lower_bound = violated;
        let bound = if lower_bound { "at least " } else { "" };
        let _ = writeln!(
            human,
            "CE level {k}: {} (max clique value {bound}{}, {}, {} vertices)",
            Outcome::from_holds(r.satisfied).label(),
            r.max_clique_value,
            certainty_name(r.certainty),
            r.vertices
        );
        let named: Vec<Vec<String>> =
            r.witness.iter().map(|m| m.iter().map(|&v| labels[v].clone()).collect()).collect();
        if !r.satisfied {
            let _ = writeln!(human, "  witness clique ({} members):", named.len());
            for (member, ids) in named.iter().zip(&r.witness) {
                let p = ids.iter().fold(Scalar::one(), |acc, &v| &acc * w.weight(v));
                let _ = writeln!(human, "    ({})  w = {p}", member.join(", "));
            }
        }
        violated |= !r.satisfied;
        levels.push(json!({
            "level": k,
            "satisfied": r.satisfied,
            "value": r.max_clique_value.to_token(),
            "lower_bound": lower_bound,
            "certainty": r.certainty,
            "vertices": r.vertices,
            "witness": named,
        }));
    }
    let outcome = Outcome::from_holds(!violated);
    let machine = json!({
        "command": "check-ce",
        "hypergraph": path_text(hypergraph),
        "weights": path_text(weights),
        "level": level,
        "max_vertices": limits.max_vertices,
        "outcome": outcome.label(),
        "levels": levels,
    });
    Ok(Report { human, machine, outcome })
}

fn decider_error(e: DeciderError) -> CliError {
    let debug = format!("{e:?}");
    let variant = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("");
    CliError::Check(format!("{e} [{variant}]"))
}

fn coords(v: &[Scalar]) -> String {
    format!("({})", v.iter().map(Scalar::to_string).collect::<Vec<_>>().join(", "))
}

fn tokens(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_token).collect()
}

fn mode_name(mode: EffectMode) -> &'static str {
    match mode {
        EffectMode::NoRestriction => "no-restriction",
        EffectMode::Generated => "generated",
    }
}

pub fn check_so(path: &Path, indices: &[usize], mode: EffectMode) -> Result<Report, CliError> {
    let sys = load_system(path)?;
    let n = sys.effect_generators().len();
    if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
        return Err(CliError::Usage(format!(
            "effect index {bad} out of range; the system lists {n} effect generators"
        )));
    }
    if indices.is_empty() {
        return Err(CliError::Usage("give at least one effect index".into()));
    }
    let effects: Vec<Effect> = indices.iter().map(|&i| sys.effect(i).clone()).collect();
    let verdict = Decider::with_mode(&sys, mode).sufficient_orthogonality(&effects).map_err(decider_error)?;
    let outcome = Outcome::from_holds(verdict.holds);
    let mut human = format!(
        "SO on {} effects {:?} ({} effects): {} ({})\n",
        sys.name(),
        indices,
        mode_name(mode),
        outcome.label(),
        certainty_name(verdict.certainty)
    );
    let witness = match &verdict.witness {
        Witness::Measurement(m) => {
            let rest = m.effects.last().expect("completed measurement");
            let _ = writeln!(human, "  rest effect u − Σ e = {}", coords(&rest.0));
            json!({ "kind": "rest-effect", "effect": tokens(&rest.0) })
        }
        Witness::Overflow { state_index, state, total } => {
            let _ =
                writeln!(human, "  pure state {state_index} {} gives total probability {total} > 1", coords(&state.0));
            json!({ "kind": "overflow", "state_index": state_index, "state": tokens(&state.0), "total": total.to_token() })
        }
        Witness::Certificate { multipliers, .. } => {
            let _ = writeln!(
                human,
                "  rest effect is outside the generated cone (Farkas multipliers {})",
                coords(multipliers)
            );
            json!({ "kind": "certificate", "multipliers": tokens(multipliers) })
        }
        other => json!({ "kind": "other", "detail": format!("{other:?}") }),
    };
    let machine = json!({
        "command": "check-so",
        "system": path_text(path),
        "indices": indices,
        "mode": mode_name(mode),
        "outcome": outcome.label(),
        "certainty": verdict.certainty,
        "witness": witness,
    });
    Ok(Report { human, machine, outcome })
}

pub fn check_ns(path: &Path) -> Result<Report, CliError> {
    let b = load_behavior(path)?;
    let verdict = is_no_signalling(&b);
    let outcome = Outcome::from_holds(verdict.holds);
    let mut human = format!("No-Signalling: {} ({})\n", outcome.label(), certainty_name(verdict.certainty));
    let witness = match &verdict.witness {
        Some(w) => {
            let _ = writeln!(
                human,
                "  marginal of parties {:?} on outputs {:?} is {} at inputs {:?} but {} at inputs {:?}",
                w.parties, w.outputs, w.first_marginal, w.first_input, w.second_marginal, w.second_input
            );
            json!({
                "parties": w.parties,
                "outputs": w.outputs,
                "first_input": w.first_input,
                "second_input": w.second_input,
                "first_marginal": w.first_marginal.to_token(),
                "second_marginal": w.second_marginal.to_token(),
            })
        }
        None => Value::Null,
    };
    let machine = json!({
        "command": "check-ns",
        "behavior": path_text(path),
        "outcome": outcome.label(),
        "certainty": verdict.certainty,
        "witness": witness,
    });
    Ok(Report { human, machine, outcome })
}

/// Names accepted by [`zoo`].
pub const ZOO_MODELS: &[&str] = &["classical", "squarebit", "polygon", "prbox", "tsirelson", "pentagon"];

fn system_summary(sys: &GptSystem) -> Result<String, CliError> {
    sys.validate().map_err(|e| CliError::Check(e.to_string()))?;
    Ok(format!(
        "{}: dimension {}, {} pure states, {} effect generators, field Q(√{}), {}, validated\n",
        sys.name(),
        sys.dim(),
        sys.pure_states().len(),
        sys.effect_generators().len(),
        sys.field_k(),
        certainty_name(sys.certainty())
    ))
}

fn behavior_summary(name: &str, b: &Behavior) -> String {
    let ns = is_no_signalling(b);
    format!(
        "{name}: {} parties, inputs {:?}, outputs {:?}, normalized, no-signalling {}\n",
        b.parties(),
        b.inputs(),
        b.outputs(),
        if ns.holds { "yes" } else { "no" }
    )
}

fn emit(text: &str, out: Option<&Path>, human: &mut String) -> Result<Value, CliError> {
    match out {
        Some(p) => {
            write(p, text)?;
            let _ = writeln!(human, "wrote {}", p.display());
            Ok(Value::String(path_text(p)))
        }
        None => {
            human.push_str(text);
            human.push('\n');
            Ok(Value::Null)
        }
    }
}

/// Writes a zoo model to `out` (or into the summary when absent). The
/// pentagon writes its hypergraph to `out` and the weight `w ≡ 1/2` to
/// `weights`.
pub fn zoo(name: &str, param: Option<usize>, out: Option<&Path>, weights: Option<&Path>) -> Result<Report, CliError> {
    let need = |what: &str| param.ok_or_else(|| CliError::Usage(format!("`zoo {name}` needs {what}")));
    let zoo_err = |e: zoo::ZooError| CliError::Usage(e.to_string());
    let mut human = String::new();
    let (kind, file) = match name {
        "classical" | "squarebit" | "polygon" => {
            let sys = match name {
                "classical" => zoo::classical_system(need("the number of outcomes")?).map_err(zoo_err)?,
                "squarebit" => zoo::square_bit(),
                _ => zoo::polygon_system(need("the number of sides")?).map_err(zoo_err)?,
            };
            human.push_str(&system_summary(&sys)?);
            ("system", emit(&sys.to_json(), out, &mut human)?)
        }
        "prbox" | "tsirelson" => {
            let b = if name == "prbox" { zoo::pr_box() } else { zoo::tsirelson_behavior() };
            human.push_str(&behavior_summary(name, &b));
            ("behavior", emit(&b.to_json(), out, &mut human)?)
        }
        "pentagon" => {
            let w = zoo::pentagon_half_weight();
            let h = w.hypergraph();
            let _ = writeln!(
                human,
                "pentagon: {} answers, {} questions, weight 1/2 on every answer",
                h.len(),
                h.edges().len()
            );
            let file = emit(&h.to_json(), out, &mut human)?;
            let wfile = emit(&w.to_json(), weights, &mut human)?;
            let machine = json!({ "command": "zoo", "model": name, "kind": "hypergraph", "file": file, "weights": wfile, "outcome": "satisfied" });
            return Ok(Report { human, machine, outcome: Outcome::Satisfied });
        }
        _ => {
            return Err(CliError::Usage(format!("unknown model `{name}`; known models: {}", ZOO_MODELS.join(", "))));
        }
    };
    let machine = json!({ "command": "zoo", "model": name, "parameter": param, "kind": kind, "file": file, "outcome": "satisfied" });
    Ok(Report { human, machine, outcome: Outcome::Satisfied })
}

/// Parses and validates a system, behavior or hypergraph file, or a weight
/// file when `hypergraph` is given. The file kind is read off its keys.
pub fn validate(path: &Path, hypergraph: Option<&Path>) -> Result<Report, CliError> {
    let text = read(path)?;
    let mut human = String::new();
    let kind = if let Some(hpath) = hypergraph {
        let h = load_hypergraph(hpath)?;
        let w = load_weight(&h, path)?;
        let _ = writeln!(
            human,
            "weight on {} answers: valid probability weight ({})",
            h.len(),
            certainty_name(w.certainty())
        );
        "weight"
    } else {
        let value: Value = serde_json::from_str(&text).map_err(|e| input_error(path, e))?;
        let has = |key: &str| value.get(key).is_some();
        if has("pure_states") {
            human.push_str(&system_summary(&load_system(path)?)?);
            "system"
        } else if has("table") {
            human.push_str(&behavior_summary("behavior", &load_behavior(path)?));
            "behavior"
        } else if has("edges") {
            let h = load_hypergraph(path)?;
            let _ = writeln!(human, "hypergraph: {} answers, {} questions, valid", h.len(), h.edges().len());
            "hypergraph"
        } else {
            return Err(input_error(path, "cannot tell the file kind; weight files need --hypergraph"));
        }
    };
    let machine = json!({ "command": "validate", "file": path_text(path), "kind": kind, "outcome": "satisfied" });
    Ok(Report { human, machine, outcome: Outcome::Satisfied })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Check(format!("machine block lacks `{key}`")))
}

fn text_field<'a>(v: &'a Value, key: &str) -> Result<&'a str, CliError> {
    field(v, key)?.as_str().ok_or_else(|| CliError::Check(format!("`{key}` is not a string")))
}

fn scalar_field(v: &Value, key: &str) -> Result<Scalar, CliError> {
    Scalar::parse_token(text_field(v, key)?).map_err(|e| CliError::Check(e.to_string()))
}

fn usize_list(v: &Value) -> Result<Vec<usize>, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Check(e.to_string()))
}

fn same_value(a: &Scalar, b: &Scalar) -> bool {
    (a - b).sign() == Sign::Zero
}

fn exceeds_one(v: &Scalar) -> bool {
    (v - &Scalar::one()).sign() == Sign::Positive
}

fn parse_event(text: &str) -> Result<Event, CliError> {
    let bad = || CliError::Check(format!("bad event `{text}`"));
    let (x, y) = text.split_once('|').ok_or_else(bad)?;
    let digits =
        |s: &str| s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>();
    Ok(Event::new(digits(x)?, digits(y)?))
}

/// Rechecks one level of a hierarchy report: a violated level needs a
/// genuine clique heavier than one; a satisfied level must reproduce the
/// printed value.
fn recheck_level<T>(
    level: &Value,
    members: Vec<Vec<T>>,
    orthogonal: impl Fn(&T, &T) -> bool,
    weight: impl Fn(&[T]) -> Scalar,
    rerun: impl Fn(usize) -> Result<Scalar, CliError>,
) -> Result<bool, CliError> {
    let k = field(level, "level")?.as_u64().ok_or_else(|| CliError::Check("bad level".into()))? as usize;
    let satisfied = field(level, "satisfied")?.as_bool().ok_or_else(|| CliError::Check("bad flag".into()))?;
    let value = scalar_field(level, "value")?;
    if satisfied {
        return Ok(!exceeds_one(&value) && same_value(&rerun(k)?, &value));
    }
    let clique = members.iter().enumerate().all(|(i, a)| {
        a.len() == k && members[i + 1..].iter().all(|b| b.len() == k && a.iter().zip(b).any(|(s, t)| orthogonal(s, t)))
    });
    let total = members.iter().fold(Scalar::zero(), |acc, m| &acc + &weight(m));
    Ok(clique && same_value(&total, &value) && exceeds_one(&total))
}

/// Re-verifies a machine block from the input files it names. Returns
/// whether the re-derived verdict equals the printed one.
pub fn recheck(machine: &Value) -> Result<bool, CliError> {
    let command = text_field(machine, "command")?;
    let outcome = text_field(machine, "outcome")?;
    let levels = || {
        field(machine, "levels").and_then(|l| l.as_array().cloned().ok_or_else(|| CliError::Check("bad levels".into())))
    };
    let cap = || field(machine, "max_vertices").map(|v| v.as_u64().unwrap_or(0) as usize);
    match command {
        "check-lo" => {
            let b = load_behavior(Path::new(text_field(machine, "behavior")?))?;
            let mut any_violated = false;
            for level in levels()? {
                let members = field(&level, "witness")?
                    .as_array()
                    .ok_or_else(|| CliError::Check("bad witness".into()))?
                    .iter()
                    .map(|m| {
                        m.as_array()
                            .ok_or_else(|| CliError::Check("bad member".into()))?
                            .iter()
                            .map(|e| parse_event(e.as_str().unwrap_or("")))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if members.iter().flatten().any(|e| !e.fits(&b)) {
                    return Ok(false);
                }
                let cap = cap()?;
                let ok = recheck_level(
                    &level,
                    members,
                    locally_orthogonal,
                    |m| member_weight(&b, m),
                    |k| {
                        check_lo_with(&b, k, cap, false)
                            .map(|r| r.max_clique_value)
                            .map_err(|e| CliError::Check(e.to_string()))
                    },
                )?;
                if !ok {
                    return Ok(false);
                }
                any_violated |= !field(&level, "satisfied")?.as_bool().unwrap_or(true);
            }
            Ok(outcome == Outcome::from_holds(!any_violated).label())
        }
        "check-ce" => {
            let h = load_hypergraph(Path::new(text_field(machine, "hypergraph")?))?;
            let w = load_weight(&h, Path::new(text_field(machine, "weights")?))?;
            let g = gptlab::contextual::exclusivity_graph(&h);
            let mut any_violated = false;
            for level in levels()? {
                let members = field(&level, "witness")?
                    .as_array()
                    .ok_or_else(|| CliError::Check("bad witness".into()))?
                    .iter()
                    .map(|m| {
                        m.as_array()
                            .ok_or_else(|| CliError::Check("bad member".into()))?
                            .iter()
                            .map(|l| h.index_of(l.as_str().unwrap_or("")).map_err(|e| CliError::Check(e.to_string())))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let cap = cap()?;
                let ok = recheck_level(
                    &level,
                    members,
                    |&a, &b| g.has_edge(a, b),
                    |m| m.iter().fold(Scalar::one(), |acc, &v| &acc * w.weight(v)),
                    |k| {
                        check_ce_with(&w, k, cap, false)
                            .map(|r| r.max_clique_value)
                            .map_err(|e| CliError::Check(e.to_string()))
                    },
                )?;
                if !ok {
                    return Ok(false);
                }
                any_violated |= !field(&level, "satisfied")?.as_bool().unwrap_or(true);
            }
            Ok(outcome == Outcome::from_holds(!any_violated).label())
        }
        "check-so" => {
            let sys = load_system(Path::new(text_field(machine, "system")?))?;
            let indices = usize_list(field(machine, "indices")?)?;
            let effects: Vec<Effect> = indices.iter().map(|&i| sys.effect(i).clone()).collect();
            let total = effects.iter().fold(sys.zero_effect(), |acc, e| acc.plus(e));
            let witness = field(machine, "witness")?;
            match text_field(witness, "kind")? {
                "overflow" => {
                    let i = field(witness, "state_index")?.as_u64().unwrap_or(u64::MAX) as usize;
                    let state =
                        sys.pure_states().get(i).ok_or_else(|| CliError::Check("state index out of range".into()))?;
                    let t = pair(&total, state).map_err(|e| CliError::Check(e.to_string()))?;
                    Ok(outcome == "violated" && exceeds_one(&t) && same_value(&t, &scalar_field(witness, "total")?))
                }
                "rest-effect" => {
                    let rest = sys.unit().minus(&total);
                    let printed = field(witness, "effect")?
                        .as_array()
                        .ok_or_else(|| CliError::Check("bad effect".into()))?
                        .iter()
                        .map(|t| {
                            Scalar::parse_token(t.as_str().unwrap_or("")).map_err(|e| CliError::Check(e.to_string()))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let matches =
                        printed.len() == rest.0.len() && printed.iter().zip(&rest.0).all(|(a, b)| same_value(a, b));
                    let valid = sys.pure_states().iter().all(|s| {
                        pair(&rest, s).map(|p| p.sign() != Sign::Negative && !exceeds_one(&p)).unwrap_or(false)
                    });
                    Ok(outcome == "satisfied" && matches && valid)
                }
                _ => {
                    let mode = if text_field(machine, "mode")? == "generated" {
                        EffectMode::Generated
                    } else {
                        EffectMode::NoRestriction
                    };
                    let v = Decider::with_mode(&sys, mode).sufficient_orthogonality(&effects).map_err(decider_error)?;
                    Ok(outcome == Outcome::from_holds(v.holds).label())
                }
            }
        }
        "check-ns" => {
            let b = load_behavior(Path::new(text_field(machine, "behavior")?))?;
            let witness = field(machine, "witness")?;
            if witness.is_null() {
                return Ok(outcome == "satisfied" && is_no_signalling(&b).holds);
            }
            let parties = usize_list(field(witness, "parties")?)?;
            let outputs = usize_list(field(witness, "outputs")?)?;
            let first = b.marginal(&parties, &usize_list(field(witness, "first_input")?)?, &outputs);
            let second = b.marginal(&parties, &usize_list(field(witness, "second_input")?)?, &outputs);
            Ok(outcome == "violated"
                && same_value(&first, &scalar_field(witness, "first_marginal")?)
                && same_value(&second, &scalar_field(witness, "second_marginal")?)
                && (&first - &second).sign() != Sign::Zero)
        }
        "zoo" | "validate" => {
            let file = field(machine, "file")?;
            match file.as_str() {
                Some(p) => validate(Path::new(p), None).map(|r| r.outcome.label() == outcome),
                None => Ok(outcome == "satisfied"),
            }
        }
        other => Err(CliError::Check(format!("unknown command `{other}`"))),
    }
}
