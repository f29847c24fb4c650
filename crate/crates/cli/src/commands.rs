use adicscope::arith::{format_f64, format_rational, rational_to_f64};
use adicscope::catalog::{build_example, model1_conformance, model_kmap, ExampleMeta};
use adicscope::eigen::{self, AcceptanceThresholds, CandidateStatus, EigenvalueCandidate, KMap};
use adicscope::measures::{self, measure_estimate, set_seed};
use adicscope::vershik::{self, PathPoint};
use adicscope::{parse_spec, serialize_spec, DiagramSpec, Error, Vertex, DEFAULT_EXPAND_LIMIT};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::args::{Candidate, Cli, Command, KMapSource, Ladder, VertexSet, Window};
use crate::report::Report;

/// Why a command stopped: bad input (exit 2) or a mathematical "no" (exit 1).
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Analysis(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Analysis(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Analysis(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::LengthMismatch { .. }
            | Error::VertexOutOfRange { .. }
            | Error::DuplicateLevel(_)
            | Error::MissingWord { .. }
            | Error::LevelSequence { .. }
            | Error::LevelOutOfRange { .. }
            | Error::InvalidWindow { .. }
            | Error::NotCoprime { .. }
            | Error::Invalid(_) => Failure::Input(e.to_string()),
            _ => Failure::Analysis(e.to_string()),
        }
    }
}

pub type Outcome = Result<(Report, bool), Failure>;

pub struct Input {
    pub spec: DiagramSpec,
    pub meta: Option<ExampleMeta>,
}

pub fn load(cli: &Cli) -> Result<Input, Failure> {
    match (&cli.example, &cli.file) {
        (Some(_), Some(_)) => Err(Failure::Input("give either --example or --file, not both".into())),
        (None, None) => Err(Failure::Input("an input is required: --example <ID> or --file <PATH>".into())),
        (Some(id), None) => {
            let (spec, meta) = build_example(*id, cli.depth.unwrap_or(5))?;
            Ok(Input { spec, meta: Some(meta) })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let spec = parse_spec(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let spec = match cli.depth {
                Some(d) => spec.truncate(d)?,
                None => spec,
            };
            Ok(Input { spec, meta: None })
        }
    }
}

pub fn thresholds(cli: &Cli) -> AcceptanceThresholds {
    AcceptanceThresholds {
        tau: cli.thresholds.tau,
        last_windows: cli.thresholds.last_windows,
        order: cli.thresholds.ladder_order.into(),
        ..AcceptanceThresholds::default()
    }
}

fn expand_limit() -> Result<u64, Failure> {
    match std::env::var("ADICSCOPE_MAX_EXPAND") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Input(format!("ADICSCOPE_MAX_EXPAND = '{v}' is not an integer"))),
        Err(_) => Ok(DEFAULT_EXPAND_LIMIT),
    }
}

fn vertices(spec: &DiagramSpec, labels: &[u32]) -> Result<Vec<Vertex>, Failure> {
    labels.iter().map(|&l| Ok(Vertex::checked(l as u64, spec.rank())?)).collect()
}

fn set_or_all(spec: &DiagramSpec, labels: &Option<VertexSet>) -> Result<Vec<Vertex>, Failure> {
    match labels {
        Some(l) => vertices(spec, &l.0),
        None => Ok(spec.vertices().collect()),
    }
}

fn join(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn f(x: f64) -> String {
    format_f64(x)
}

/// Window from --m/--n, defaulting to `(depth-2, depth)`.
fn window(spec: &DiagramSpec, w: &Window) -> Result<(usize, usize), Failure> {
    let depth = spec.depth();
    let n = w.n.unwrap_or(depth);
    let m = w.m.unwrap_or(n.saturating_sub(2).max(1));
    if m == 0 || m >= n || n > depth {
        return Err(Failure::Input(format!("invalid window ({m},{n}) for depth {depth}")));
    }
    Ok((m, n))
}

fn classify(spec: &DiagramSpec, c: &Candidate) -> Result<EigenvalueCandidate, Failure> {
    if c.b == 0 {
        return Err(Failure::Input("b must be positive".into()));
    }
    Ok(eigen::classify_candidate(spec, c.a, c.b, spec.depth())?)
}

fn candidate_notes(r: &mut Report, c: &EigenvalueCandidate) {
    r.note("candidate", format!("a = {}, b = {}", c.a, c.b));
    r.note("status", serde_json::to_value(c.status).unwrap().as_str().unwrap());
    r.note("bb", c.bb);
    r.note("p_n mod b", c.residues.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    r.note("p", c.p.map(|p| p.to_string()).unwrap_or_else(|| "not constant".into()));
}

pub fn run(cli: &Cli, input: &Input) -> Outcome {
    let spec = &input.spec;
    match &cli.command {
        Command::Validate => validate(spec),
        Command::Matrices(w) => matrices(spec, w),
        Command::Words(w) => words(spec, w),
        Command::Measures { set, exact } => measures_table(spec, set, *exact),
        Command::Clean => clean(cli, spec),
        Command::Eigen { candidate, set, windows } => eigen_cmd(cli, spec, candidate, set, windows),
        Command::Kmap { candidate, window: w, set } => kmap_cmd(spec, candidate, w, set),
        Command::Cocycle { candidate, window: w, set, kmap } => cocycle_cmd(spec, candidate, w, set, *kmap),
        Command::Psi { candidate, window: w, t2, set } => psi_cmd(spec, candidate, w, *t2, set),
        Command::Survey { b_max, sets, windows } => survey_cmd(cli, spec, *b_max, sets, windows),
        Command::Orbit { top, ranks, steps, wrap } => orbit(spec, *top, ranks, *steps, *wrap),
        Command::Converge { candidate, window: w, t0, samples, seed, stable_levels, kmap, set } => {
            converge(spec, candidate, w, *t0, *samples, *seed, *stable_levels, *kmap, set)
        }
        Command::Example => example(input),
        Command::Conformance { l_bound } => conformance(spec, *l_bound),
    }
}

fn validate(spec: &DiagramSpec) -> Outcome {
    let p = spec.validate_properness();
    let mut r = Report::table(vec!["property", "ok"]);
    for (name, ok) in [
        ("h1_trivial_first_level", p.h1_ok),
        ("h2_positive_incidence", p.h2_ok),
        ("h3_constant_rank", p.h3_ok),
        ("h4_unique_maximal_path", p.h4_ok),
        ("unique_minimal_path", p.unique_min_ok),
        ("toeplitz", spec.is_toeplitz()),
    ] {
        r.row(vec![name.into(), ok.to_string()]);
    }
    r.note("rank", spec.rank());
    r.note("depth", spec.depth());
    if !p.failures.is_empty() {
        r.note("failures", p.failures.join("\n"));
    }
    r.body = Some(json!({ "properness": p, "toeplitz": spec.is_toeplitz() }));
    Ok((r, p.all_ok()))
}

fn matrices(spec: &DiagramSpec, w: &Window) -> Outcome {
    let mut r = Report::table(vec!["m", "n", "t1", "t2", "count"]);
    let windows: Vec<(usize, usize)> = match (w.m, w.n) {
        (None, None) => (2..=spec.depth()).map(|n| (n - 1, n)).collect(),
        _ => vec![window(spec, w)?],
    };
    for (m, n) in windows {
        let p = spec.product_matrix(m, n)?;
        for t1 in spec.vertices() {
            for t2 in spec.vertices() {
                r.row(vec![m.to_string(), n.to_string(), t1.to_string(), t2.to_string(), p.get(t1.index(), t2.index()).to_string()]);
            }
        }
    }
    r.note("heights", (1..=spec.depth()).map(|n| spec.p(n).map(|p| p.to_string()).unwrap_or_else(|_| "-".into())).collect::<Vec<_>>().join(","));
    Ok((r, true))
}

fn words(spec: &DiagramSpec, w: &Window) -> Outcome {
    let mut r = Report::table(vec!["m", "n", "vertex", "length", "word"]);
    match (w.m, w.n) {
        (None, None) => {
            for lvl in spec.levels() {
                for t in spec.vertices() {
                    let word = lvl.word(t);
                    r.row(vec![(lvl.level - 1).to_string(), lvl.level.to_string(), t.to_string(), word.len().to_string(), word.to_string()]);
                }
            }
        }
        _ => {
            let (m, n) = window(spec, w)?;
            let limit = expand_limit()?;
            r.note("expand_limit", limit);
            for (i, word) in spec.compose_all(m, n, limit)?.iter().enumerate() {
                r.row(vec![m.to_string(), n.to_string(), (i + 1).to_string(), word.len().to_string(), word.to_string()]);
            }
        }
    }
    Ok((r, true))
}

fn measures_table(spec: &DiagramSpec, set: &Option<VertexSet>, exact: bool) -> Outcome {
    let depth = spec.depth();
    let rows = measures::tower_mass_limit_table(spec, depth)?;
    let seeds = set_or_all(spec, set)?;
    let show = |x: &num_rational::BigRational| if exact { format_rational(x) } else { f(rational_to_f64(x)) };
    let mut r = Report::table(vec!["level", "vertex", "mass_lo", "mass_hi", "mass_seeded"]);
    for level in 1..depth {
        let seeded = measure_estimate(spec, level, depth, &set_seed(spec.rank(), &seeds))?;
        for row in rows.iter().filter(|x| x.level == level) {
            r.row(vec![
                level.to_string(),
                row.vertex.to_string(),
                show(&row.lo),
                show(&row.hi),
                show(&seeded.tower[row.vertex.index()]),
            ]);
        }
    }
    r.note("seed_level", depth);
    r.note("seed_set", join(&seeds));
    Ok((r, true))
}

fn clean(cli: &Cli, spec: &DiagramSpec) -> Outcome {
    let c = measures::cleanliness_classify(spec, spec.depth(), cli.thresholds.delta, cli.thresholds.cluster_tol)?;
    let mut r = Report::table(vec!["group", "seeds", "I", "level", "vertex", "mass"]);
    for (g, group) in c.groups.iter().enumerate() {
        for (level, masses) in &group.trajectory {
            for (t, m) in masses.iter().enumerate() {
                r.row(vec![
                    (g + 1).to_string(),
                    join(&group.seeds),
                    join(&group.set),
                    level.to_string(),
                    (t + 1).to_string(),
                    f(*m),
                ]);
            }
        }
    }
    let sets: Vec<String> = c.sets().iter().map(|s| format!("{{{}}}", join(s))).collect();
    r.note("sets", sets.join(" "));
    r.note("vanishing", join(&c.vanishing));
    r.note("exact_finite_rank", c.exact);
    r.body = Some(json!({
        "delta": c.delta,
        "cluster_tol": c.cluster_tol,
        "cluster_level": c.cluster_level,
        "groups": c.groups.iter().map(|g| json!({"I": g.set, "seeds": g.seeds, "trajectory": g.trajectory})).collect::<Vec<_>>(),
        "vanishing": c.vanishing,
        "exact": c.exact,
    }));
    Ok((r, true))
}

fn eigen_cmd(
    cli: &Cli,
    spec: &DiagramSpec,
    cand: &Candidate,
    set: &Option<VertexSet>,
    windows: &Option<Ladder>,
) -> Outcome {
    let c = classify(spec, cand)?;
    let mut r = Report::table(vec!["m", "n", "t2", "deficiency"]);
    candidate_notes(&mut r, &c);
    let set_v = match set {
        Some(l) => Some(vertices(spec, &l.0)?),
        None => None,
    };
    let reject = |mut r: Report, reason: String| {
        r.note("accepted", false);
        r.note("reason", reason);
        Ok((r, false))
    };
    match c.status {
        CandidateStatus::Rejected => return reject(r, format!("𝐛 = {} > d = {}", c.bb, spec.rank())),
        CandidateStatus::Undecided => return reject(r, "(b, p_n) still growing at the last level".into()),
        _ => {}
    }
    if let Some(s) = &set_v {
        if c.status == CandidateStatus::Candidate && c.bb > s.len() as u64 {
            return reject(r, format!("𝐛 > #I: 𝐛 = {} exceeds #I = {}", c.bb, s.len()));
        }
    }
    let ladder = windows.clone().map(|l| l.0).unwrap_or_else(|| eigen::default_ladder(spec.depth()));
    if ladder.is_empty() {
        return Err(Failure::Input(format!("no ladder windows at depth {}", spec.depth())));
    }
    let report = eigen::deficiency_table(spec, &c, &ladder, set_v.as_deref())?;
    for w in &report.windows {
        r.row(vec![w.m.to_string(), w.n.to_string(), w.t2.to_string(), f(w.deficiency)]);
    }
    let th = thresholds(cli);
    let (accepted, reason) = eigen::accept(&report, &ladder, &th);
    r.note("I", set_v.as_deref().map(join).unwrap_or_else(|| "all".into()));
    if c.status == CandidateStatus::Continuous {
        r.note("accepted", "continuous eigenvalue");
        r.note("reason", "b/(b,p_n) = 1");
        r.body = Some(json!({ "candidate": c, "windows": report.windows }));
        return Ok((r, true));
    }
    r.note("accepted", accepted);
    r.note("reason", &reason);
    r.body = Some(json!({ "candidate": c, "windows": report.windows, "gaps": report.gaps, "accepted": accepted, "reason": reason }));
    Ok((r, accepted))
}

fn examinable(spec: &DiagramSpec, cand: &Candidate) -> Result<EigenvalueCandidate, Failure> {
    let c = classify(spec, cand)?;
    match c.status {
        CandidateStatus::Candidate | CandidateStatus::Continuous => Ok(c),
        s => Err(Failure::Analysis(format!("b = {} has status {:?}; no residue classes to examine", c.b, s))),
    }
}

fn kmap_rows(r: &mut Report, k: &KMap) {
    for (t1, t2, class) in k.entries() {
        let mass = k.dominant_mass(t1, t2).map(format_rational).unwrap_or_default();
        r.row(vec![t1.to_string(), t2.to_string(), class.to_string(), mass]);
    }
}

fn kmap_cmd(spec: &DiagramSpec, cand: &Candidate, w: &Window, set: &Option<VertexSet>) -> Outcome {
    let c = examinable(spec, cand)?;
    let (m, n) = window(spec, w)?;
    let targets = set_or_all(spec, set)?;
    let k = eigen::extract_kmap(spec, &c, m, n, &targets)?;
    let mut r = Report::table(vec!["t1", "t2", "k", "dominant_mass"]);
    candidate_notes(&mut r, &c);
    r.note("window", format!("{m}:{n}"));
    r.note("modulus", k.modulus);
    kmap_rows(&mut r, &k);
    r.body = Some(serde_json::to_value(&k).unwrap());
    Ok((r, true))
}

fn chosen_kmap(spec: &DiagramSpec, c: &EigenvalueCandidate, w: &Window, source: KMapSource) -> Result<KMap, Failure> {
    let all: Vec<Vertex> = spec.vertices().collect();
    match source {
        KMapSource::Model => {
            if spec.rank() != adicscope::catalog::RANK {
                return Err(Failure::Analysis(format!("the model map needs rank 7, got {}", spec.rank())));
            }
            Ok(model_kmap())
        }
        KMapSource::Zero => Ok(KMap::from_fn(c.bb.max(1), &all, &all, |_, _| 0)),
        KMapSource::Extract => {
            let (m, n) = window(spec, w)?;
            Ok(eigen::extract_kmap(spec, c, m, n, &all)?)
        }
    }
}

fn cocycle_cmd(spec: &DiagramSpec, cand: &Candidate, w: &Window, set: &Option<VertexSet>, source: KMapSource) -> Outcome {
    let c = examinable(spec, cand)?;
    let set = set_or_all(spec, set)?;
    let k = chosen_kmap(spec, &c, w, source)?;
    let report = eigen::cocycle_check(&k, &c, &set)?;
    let mut r = Report::table(vec!["law", "t1", "t2", "t3", "lhs", "rhs"]);
    candidate_notes(&mut r, &c);
    r.note("kmap", serde_json::to_value(source).unwrap().as_str().unwrap());
    r.note("I", join(&set));
    r.note("passed", report.passed);
    for v in &report.violations {
        let law = serde_json::to_value(&v.law).unwrap();
        r.row(vec![law.as_str().unwrap_or_default().into(), v.t1.to_string(), v.t2.to_string(), v.t3.to_string(), v.lhs.to_string(), v.rhs.to_string()]);
    }
    r.body = Some(json!({ "report": report, "kmap": k }));
    Ok((r, report.passed))
}

fn psi_cmd(spec: &DiagramSpec, cand: &Candidate, w: &Window, t2: u32, set: &Option<VertexSet>) -> Outcome {
    let c = examinable(spec, cand)?;
    let (m, n) = window(spec, w)?;
    let t2 = Vertex::checked(t2 as u64, spec.rank())?;
    let domain = set_or_all(spec, set)?;
    let p = eigen::psi_partition(spec, &c, m, n, t2, &domain)?;
    let mut r = Report::table(vec!["class", "members", "sum", "distance"]);
    candidate_notes(&mut r, &c);
    r.note("window", format!("{m}:{n}"));
    r.note("t2", t2);
    r.note("onto", p.onto);
    if !p.unassigned.is_empty() {
        r.note("unassigned", join(&p.unassigned));
    }
    for a in &p.atoms {
        r.row(vec![a.class.to_string(), join(&a.members), f(a.sum), f(a.distance)]);
    }
    r.body = Some(serde_json::to_value(&p).unwrap());
    Ok((r, true))
}

fn survey_cmd(
    cli: &Cli,
    spec: &DiagramSpec,
    b_max: u64,
    sets: &[VertexSet],
    windows: &Option<Ladder>,
) -> Outcome {
    let hypotheses: Vec<Vec<Vertex>> = if sets.is_empty() {
        measures::cleanliness_classify(spec, spec.depth(), cli.thresholds.delta, cli.thresholds.cluster_tol)?.sets()
    } else {
        sets.iter().map(|s| vertices(spec, &s.0)).collect::<Result<_, _>>()?
    };
    let th = thresholds(cli);
    let s = eigen::survey(spec, b_max, spec.depth(), &hypotheses, windows.as_ref().map(|l| l.0.as_slice()), &th)?;
    let mut r = Report::table(vec!["I", "b", "bb", "status", "accepted", "max_final_deficiency", "reason"]);
    for m in &s.measures {
        for e in &m.entries {
            let worst = e.final_deficiency.iter().map(|x| x.1).fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
            r.row(vec![
                join(&m.set),
                e.b.to_string(),
                e.bb.to_string(),
                serde_json::to_value(e.status).unwrap().as_str().unwrap().into(),
                e.accepted.to_string(),
                worst.map(f).unwrap_or_default(),
                e.reason.clone(),
            ]);
        }
    }
    let per: Vec<String> = s
        .measures
        .iter()
        .map(|m| {
            let bbs: Vec<String> = m.accepted_bb.iter().map(|x| x.to_string()).collect();
            format!("I = {{{}}}: accepted 𝐛 {{{}}}, b_mu = {}", join(&m.set), bbs.join(","), m.b_mu)
        })
        .collect();
    r.note("measures", per.join("\n"));
    r.note("sum_b_mu", format!("{} (bound {}, ok = {})", s.sum_b_mu, spec.rank(), s.sum_bound_ok));
    r.note("measure_count_bound", format!("{} (ok = {})", s.measure_count_bound, s.measure_count_ok));
    r.note("windows", s.windows.iter().map(|(m, n)| format!("{m}:{n}")).collect::<Vec<_>>().join(","));
    r.note("a", "1 (every a coprime to b shares the status)");
    r.body = Some(serde_json::to_value(&s).unwrap());
    Ok((r, true))
}

fn orbit(spec: &DiagramSpec, top: Option<u32>, ranks: &Option<Vec<String>>, steps: usize, wrap: bool) -> Outcome {
    let depth = spec.depth();
    let top = match top {
        Some(t) => Vertex::checked(t as u64, spec.rank())?,
        None => vershik::canonical_min_top(spec, depth),
    };
    let mut x = match ranks {
        Some(rs) => {
            let parsed: Vec<BigUint> = rs
                .iter()
                .map(|s| s.trim().parse().map_err(|_| Failure::Input(format!("invalid rank '{s}'"))))
                .collect::<Result<_, _>>()?;
            if parsed.len() != depth - 1 {
                return Err(Failure::Input(format!("expected {} ranks j_2..j_{depth}, got {}", depth - 1, parsed.len())));
            }
            PathPoint::new(spec, top, parsed)?
        }
        None => vershik::min_path(spec, depth, top)?,
    };
    let mut r = Report::table(vec!["step", "entrance_time", "vertices", "ranks"]);
    let mut ok = true;
    for step in 0..=steps {
        let chain: Vec<String> = (1..=depth).map(|n| x.vertex(n).to_string()).collect();
        let ranks: Vec<String> = x.ranks().iter().map(|j| j.to_string()).collect();
        r.row(vec![step.to_string(), x.entrance_time(spec, depth)?.to_string(), chain.join(","), ranks.join(",")]);
        if step == steps {
            break;
        }
        match vershik::successor(spec, &x, wrap) {
            Ok(y) => x = y,
            Err(Error::MaximalPath) => {
                r.note("stopped", format!("maximal path reached after {step} steps; pass --wrap to continue"));
                ok = false;
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    r.note("depth", depth);
    Ok((r, ok))
}

#[allow(clippy::too_many_arguments)]
fn converge(
    spec: &DiagramSpec,
    cand: &Candidate,
    w: &Window,
    t0: u32,
    samples: usize,
    seed: u64,
    stable_levels: usize,
    source: KMapSource,
    set: &Option<VertexSet>,
) -> Outcome {
    let c = examinable(spec, cand)?;
    let t0 = Vertex::checked(t0 as u64, spec.rank())?;
    let set = set_or_all(spec, set)?;
    let k = chosen_kmap(spec, &c, w, source)?;
    let mut masses = vec![0.0; spec.rank()];
    for t in &set {
        masses[t.index()] = 1.0 / set.len() as f64;
    }
    let depth = spec.depth();
    let rep = vershik::convergence_test(spec, &c, &k, t0, samples, depth, seed, &masses, stable_levels)?;
    let mut r = Report::table(vec!["last_change_level", "samples"]);
    for (level, count) in &rep.last_change {
        r.row(vec![level.to_string(), count.to_string()]);
    }
    candidate_notes(&mut r, &c);
    r.note("kmap", serde_json::to_value(source).unwrap().as_str().unwrap());
    r.note("seed", seed);
    r.note("stabilized", format!("{} of {}", rep.stabilized, rep.samples));
    r.note("fraction", f(rep.fraction));
    r.note("missing_pairs", rep.missing);
    r.body = Some(serde_json::to_value(&rep).unwrap());
    Ok((r, true))
}

fn example(input: &Input) -> Outcome {
    let meta = input
        .meta
        .as_ref()
        .ok_or_else(|| Failure::Input("the example command needs --example <ID>".into()))?;
    let mut r = Report::default();
    let sets: Vec<String> = meta.measure_sets.iter().map(|s| format!("{{{}}}", join(s))).collect();
    r.note("example", meta.id);
    r.note("measure_sets", sets.join(" "));
    let evs: Vec<String> = meta
        .eigenvalues
        .iter()
        .map(|e| {
            let kind = if e.noncontinuous { "eigenvalue" } else { "not an eigenvalue" };
            format!("exp(2πi/{}) on {}: 𝐛 = {}, {kind}", e.b, sets[e.set], e.bb)
        })
        .collect();
    r.note("claims", evs.join("\n"));
    if !meta.tower_limits.is_empty() {
        let l: Vec<String> = meta.tower_limits.iter().map(|l| format!("{}: {}/{}", l.vertex, l.num, l.den)).collect();
        r.note("tower_limits", l.join(", "));
    }
    r.note("notes", meta.notes.join("\n"));
    r.text = Some(serialize_spec(&input.spec));
    r.body = Some(serde_json::to_value(meta).unwrap());
    Ok((r, true))
}

fn conformance(spec: &DiagramSpec, l_bound: u64) -> Outcome {
    let c = model1_conformance(spec, l_bound)?;
    let mut r = Report::table(vec!["level", "vertex", "exceptions", "best_exceptions", "best_start"]);
    for w in &c.words {
        r.row(vec![
            w.level.to_string(),
            w.vertex.to_string(),
            w.exceptions.to_string(),
            w.best_exceptions.to_string(),
            w.best_start.to_string(),
        ]);
    }
    r.note("l_bound", l_bound);
    r.note("max_exceptions", &c.max_exceptions);
    r.note("passed", c.passed);
    Ok((r, c.passed))
}

pub fn config_value(cli: &Cli) -> Value {
    let mut v = serde_json::to_value(cli).unwrap();
    if let Some(obj) = v.as_object_mut() {
        obj.remove("thresholds");
        obj.remove("out");
        obj.remove("format");
    }
    v
}
