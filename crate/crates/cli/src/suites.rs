//! One function per subcommand; each returns reports plus a JSON payload.

use num::{BigRational, Signed};
use serde_json::{json, Value};

use branched::bounds::concavity::{concavity_sweep, counting_sweep};
use branched::bounds::constants::{ln_c_k, Constants};
use branched::bounds::counterexample::{counterexample_series, CounterexampleParams};
use branched::bounds::decay::{branched_vs_geometric, verify_decay, HolderNorms, IntervalSample};
use branched::bounds::lemmas::{check_appendix_lemmas, LemmaGrid};
use branched::bounds::main_lemma::{check_main_lemma_remainder, dyadic_triples, Normalisation};
use branched::bounds::{BoundsError, CheckReport};
use branched::character::{
    factorisation_sides, identity_path, random_character, star_norm_bound_check, truncation_degree, NormParams,
};
use branched::extension::{extend, ExtendConfig, IdentityPath, PathSource, Truncated};
use branched::hopf::{binomial, coproduct_forest, is_coassociative_on, satisfies_counit_on, tree_binomial};
use branched::lift::{default_alphabet, holder_norm_estimate, lift_polynomial, lift_young, SampledPath, YoungConfig};
use branched::scalar::parse_rational;
use branched::trees::enumerate_trees;
use branched::{Alphabet, Catalog, Character, Forest, Scalar};

use crate::args::{CounterexampleArgs, DecayArgs, ExtendArgs, LemmasArgs, LiftArgs, SourceArgs};
use crate::source::Source;
use crate::CliError;

pub struct SuiteOutput {
    pub name: String,
    pub reports: Vec<CheckReport>,
    pub data: Value,
    /// Human-readable lines.
    pub lines: Vec<String>,
    /// Written as `<name>.csv` and echoed on stdout instead of `lines`.
    pub csv: Option<String>,
}

impl SuiteOutput {
    fn new(name: &str) -> Self {
        SuiteOutput { name: name.into(), reports: Vec::new(), data: Value::Null, lines: Vec::new(), csv: None }
    }
}

fn rational_arg(s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Config(format!("`{s}` is not a rational number")))
}

fn check_gamma(gamma: f64) -> Result<(), CliError> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("--gamma {gamma} outside (0, 1]")))
    }
}

pub fn enumerate(n: usize, labels: u16) -> Result<SuiteOutput, CliError> {
    let alphabet = if labels == 0 { Alphabet::Unlabelled } else { Alphabet::Labels(labels) };
    let trees: Vec<String> = enumerate_trees(n, alphabet).iter().map(ToString::to_string).collect();
    let mut out = SuiteOutput::new("enumerate");
    out.data = json!({ "n": n, "alphabet": alphabet.to_string(), "count": trees.len(), "trees": trees });
    out.lines = trees;
    Ok(out)
}

pub fn coproduct(forest: &str) -> Result<SuiteOutput, CliError> {
    let f: Forest = forest.parse().map_err(|e| CliError::Config(format!("{forest}: {e}")))?;
    let terms: Vec<String> = coproduct_forest(&f).iter().map(ToString::to_string).collect();
    let mut out = SuiteOutput::new("coproduct");
    out.data = json!({ "forest": f.to_string(), "terms": terms });
    out.lines = terms;
    Ok(out)
}

fn young_config(tol: f64, max_level: u32) -> Result<YoungConfig, CliError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Config(format!("--tol {tol} must be positive")));
    }
    Ok(YoungConfig { tol, max_level })
}

/// Indices `0, step, 2·step, …` of a sample grid, at most `2^level + 1` of them.
fn subgrid(len: usize, level: u32) -> Vec<usize> {
    let step = ((len - 1) >> level).max(1);
    (0..len).step_by(step).collect()
}

fn chen_report(lift: &branched::lift::NumericLift, tol: f64) -> Result<CheckReport, CliError> {
    let idx = subgrid(lift.times().len(), 3);
    let mut r = CheckReport::with_eps("chen", format!("{} sample pairs", idx.len() * (idx.len() - 1) / 2), 0.0);
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            let via_chen = lift.between(i, j)?;
            let direct = lift.direct(i, j)?;
            for tree in lift.trees() {
                let diff = (via_chen.tree_value(tree)? - direct.tree_value(tree)?).abs();
                r.record(|| format!("τ={tree} i={i} j={j}"), diff, tol);
            }
        }
    }
    Ok(r)
}

pub fn lift(args: &LiftArgs) -> Result<SuiteOutput, CliError> {
    check_gamma(args.gamma)?;
    let cfg = young_config(args.tol, args.max_level)?;
    let mut out = SuiteOutput::new("lift");
    match Source::load(&args.source, args.gamma)? {
        Source::Polynomial(path) => {
            let alphabet = default_alphabet(path.dim());
            let exact = lift_polynomial(&path, args.degree, alphabet)?;
            let (s, t) = (rational_arg(&args.s)?, rational_arg(&args.t)?);
            let x = exact.character_at(&s, &t);
            let catalog = Catalog::new(args.degree, alphabet);
            for tree in catalog.trees_up_to(args.degree) {
                out.lines.push(format!("{tree} = {}", x.tree_value(tree)?));
            }
            let mut data = json!({ "mode": "exact", "s": args.s, "t": args.t, "character": x.to_json(&catalog)? });
            if args.compare {
                let numeric = lift_young(&path.sample(args.samples(), args.gamma)?, args.degree, cfg)?;
                let mut agree = CheckReport::with_eps(
                    "lift-agreement",
                    format!("{} samples, trees ≤ {}", args.samples(), args.degree),
                    0.0,
                );
                let times = numeric.times();
                for &j in &subgrid(times.len(), 4) {
                    let want = exact.character_at_f64(0.0, times[j]);
                    let got = numeric.from_start(j);
                    for tree in numeric.trees() {
                        let diff = (got.tree_value(tree)? - want.tree_value(tree)?).abs();
                        agree.record(|| format!("τ={tree} t={}", times[j]), diff, args.agree_tol);
                    }
                }
                out.reports.push(agree);
                out.reports.push(chen_report(&numeric, args.chen_tol)?);
                data["numeric_level"] = json!(numeric.level);
                data["numeric_deltas"] = json!(numeric.deltas);
            }
            out.data = data;
        }
        Source::Sampled(path) => {
            let numeric = lift_young(&path, args.degree, cfg)?;
            let last = numeric.times().len() - 1;
            let x = numeric.from_start(last);
            for tree in numeric.trees() {
                out.lines.push(format!("{tree} = {:.12e}", x.tree_value(tree)?));
            }
            out.reports.push(chen_report(&numeric, args.chen_tol)?);
            out.data = json!({
                "mode": "numeric",
                "level": numeric.level,
                "deltas": numeric.deltas,
                "character": x.to_json(numeric.catalog())?,
            });
        }
    }
    Ok(out)
}

impl LiftArgs {
    fn samples(&self) -> usize {
        self.source.samples
    }
}

fn extend_config(args: &ExtendArgs) -> Result<ExtendConfig, CliError> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::Config(format!("--tol {} must be positive", args.tol)));
    }
    if args.degree < args.truncation || args.truncation == 0 {
        return Err(CliError::Config(format!(
            "need 1 ≤ N ≤ M, got N = {} and M = {}",
            args.truncation, args.degree
        )));
    }
    Ok(ExtendConfig { tol: args.tol, min_level: args.min_level, max_level: args.max_level, ..ExtendConfig::default() })
}

/// Extend the truncated source and compare with the source's own high-degree values.
fn extend_and_compare<S: Scalar + PartialOrd>(
    full: &impl PathSource<S>,
    args: &ExtendArgs,
    s: &S,
    t: &S,
    out: &mut SuiteOutput,
) -> Result<(), CliError> {
    let cfg = extend_config(args)?;
    let truncated = Truncated::new(full, args.truncation);
    let ext = extend(&truncated, args.truncation, args.degree, s, t, cfg)?;
    let mut agree = CheckReport::with_eps(
        "extension-agreement",
        format!("N={} M={} [{}, {}]", args.truncation, args.degree, args.s, args.t),
        0.0,
    );
    for (tree, value) in ext.trees.iter().zip(&ext.values) {
        let want = full.tree_value(s, t, tree)?;
        let diff = (value.clone() - want).abs().to_f64();
        agree.record(|| format!("τ={tree}"), diff, args.agree_tol);
        out.lines.push(format!("{tree} = {:.15e} (source {:.15e})", value.to_f64(), full.tree_value(s, t, tree)?.to_f64()));
    }
    out.reports.push(agree);
    out.data = json!({
        "truncation": args.truncation,
        "degree": args.degree,
        "converged_level": ext.converged_level,
        "records": ext.records(),
    });
    Ok(())
}

pub fn extend_cmd(args: &ExtendArgs) -> Result<SuiteOutput, CliError> {
    let mut out = SuiteOutput::new("extend");
    let is_identity = matches!(args.source.preset, Some(crate::args::Preset::Identity));
    if is_identity {
        let s = Scalar::to_f64(&rational_arg(&args.s)?);
        let t = Scalar::to_f64(&rational_arg(&args.t)?);
        extend_and_compare(&IdentityPath { max_degree: args.degree }, args, &s, &t, &mut out)?;
        return Ok(out);
    }
    match Source::load(&args.source, 1.0)? {
        Source::Polynomial(path) => {
            let lift = lift_polynomial(&path, args.degree, default_alphabet(path.dim()))?;
            let (s, t) = (rational_arg(&args.s)?, rational_arg(&args.t)?);
            extend_and_compare(&lift, args, &s, &t, &mut out)?;
        }
        Source::Sampled(_) => {
            return Err(CliError::Config("extend needs a two-parameter source: --preset identity or a polynomial".into()))
        }
    }
    Ok(out)
}

/// Pairs `(s, t)` with `s < t` on the dyadic grid of `[0, 1]`.
fn dyadic_pairs(level: u32) -> Vec<(f64, f64)> {
    let m = 1usize << level;
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..=m {
            out.push((i as f64 / m as f64, j as f64 / m as f64));
        }
    }
    out
}

pub fn verify_decay_cmd(args: &DecayArgs) -> Result<SuiteOutput, CliError> {
    check_gamma(args.gamma)?;
    let truncation = truncation_degree(args.gamma);
    if args.degree < truncation {
        return Err(CliError::Config(format!("--degree must be at least N = {truncation} at γ = {}", args.gamma)));
    }
    let source = Source::load(&args.source, args.gamma)?;
    let (samples, catalog, sampled) = match &source {
        Source::Polynomial(path) => {
            let alphabet = default_alphabet(path.dim());
            let lift = lift_polynomial(path, args.degree, alphabet)?;
            let samples: Vec<_> = dyadic_pairs(args.level)
                .into_iter()
                .map(|(s, t)| IntervalSample { s, t, x: lift.character_at_f64(s, t) })
                .collect();
            let grid = path.sample(1 << args.level, args.gamma)?;
            (samples, Catalog::new(args.degree, alphabet), grid)
        }
        Source::Sampled(path) => {
            let lift = lift_young(path, args.degree, young_config(args.tol, 12)?)?;
            let idx = subgrid(path.times().len(), args.level);
            let mut samples = Vec::new();
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    samples.push(IntervalSample { s: path.times()[i], t: path.times()[j], x: lift.between(i, j)? });
                }
            }
            let grid = SampledPath::new(
                idx.iter().map(|&i| path.times()[i]).collect(),
                idx.iter().map(|&i| path.values()[i].clone()).collect(),
                path.gamma(),
            )?;
            (samples, lift.catalog().clone(), grid)
        }
    };
    let norms = HolderNorms::estimate(&samples, args.gamma, args.degree, &catalog)?;
    let report = verify_decay(&samples, args.gamma, args.degree, &catalog, &norms)?;
    out_decay(args, source.describe(), report, &sampled, &norms, truncation)
}

fn out_decay(
    args: &DecayArgs,
    described: String,
    report: branched::bounds::decay::DecayReport,
    grid: &SampledPath,
    norms: &HolderNorms,
    truncation: usize,
) -> Result<SuiteOutput, CliError> {
    let mut out = SuiteOutput::new("verify-decay");
    out.lines.push(format!("source: {described}"));
    out.lines.push(format!("norm scale {:.6}, ln c̄ = {:.6}", report.norm_scale, report.ln_c_bar));
    let mut data = json!({ "source": described, "decay": report });
    if args.crossover {
        if grid.dim() != 2 {
            return Err(CliError::Config("--crossover needs a two-dimensional path".into()));
        }
        let geometric = holder_norm_estimate(grid, args.gamma);
        let c = branched_vs_geometric(args.gamma, geometric, norms.norm_scale(truncation)?)?;
        out.lines.push(format!(
            "branched bound wins for n ≥ n₀ = e^{:.3} (‖(x,y)‖ ≈ {geometric:.4})",
            c.ln_n0
        ));
        data["crossover"] = json!(c);
    }
    out.reports.push(report.strict);
    out.reports.push(report.inflated);
    out.data = data;
    Ok(out)
}

pub fn counterexample(args: &CounterexampleArgs) -> Result<SuiteOutput, CliError> {
    let params = CounterexampleParams { gamma: args.gamma, beta: args.beta, a: args.a, b: args.b };
    params.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let rows = counterexample_series(args.n_max, &params)?;
    let mut r = CheckReport::new("counterexample-lower-bound", format!("n ≤ {}", args.n_max));
    let mut csv = String::from("n,exact_sum,lower_bound\n");
    for row in &rows {
        r.record_log(|| format!("n={}", row.n), row.ln_lower_bound, row.ln_exact_sum);
        csv.push_str(&format!("{},{:e},{:e}\n", row.n, row.exact_sum, row.lower_bound));
    }
    let mut out = SuiteOutput::new("counterexample");
    out.lines.push(format!(
        "ratio (a^γ/β + b^γ)/(a+b)^γ = {:.12}; {}",
        params.ratio(),
        if params.diverges() { "diverges" } else { "bounded" }
    ));
    out.reports.push(r);
    out.data = json!({ "params": params, "ratio": params.ratio(), "diverges": params.diverges(), "rows": rows });
    out.csv = Some(csv);
    Ok(out)
}

/// Sizes and γ values for the lemma suites.
pub struct LemmaPlan {
    pub gammas: Vec<f64>,
    pub concavity_gammas: Vec<f64>,
    pub max_tree: usize,
    pub concavity_tree: usize,
    pub characters: u64,
    pub level: u32,
    pub seed: u64,
}

impl LemmaPlan {
    pub fn from_args(args: &LemmasArgs, seed: u64) -> Result<Self, CliError> {
        check_gamma(args.gamma)?;
        if args.max_tree < 2 {
            return Err(CliError::Config("--max-tree must be at least 2".into()));
        }
        Ok(LemmaPlan {
            gammas: vec![args.gamma],
            concavity_gammas: vec![args.gamma],
            max_tree: args.max_tree,
            concavity_tree: args.concavity_tree.unwrap_or(args.max_tree + 1),
            characters: args.characters,
            level: args.level,
            seed,
        })
    }
}

fn hopf_reports(max_tree: usize) -> Result<Vec<CheckReport>, CliError> {
    let max_forest = max_tree - 1;
    let catalog = Catalog::new(max_tree, Alphabet::Unlabelled);
    let mut coassoc = CheckReport::with_eps("coassociativity", format!("forests ≤ {max_forest}"), 0.0);
    let mut counit = CheckReport::with_eps("counit", format!("forests ≤ {max_forest}"), 0.0);
    for f in catalog.forests_up_to(max_forest) {
        coassoc.record(|| f.to_string(), if is_coassociative_on(f) { 0.0 } else { 1.0 }, 0.0);
        counit.record(|| f.to_string(), if satisfies_counit_on(f) { 0.0 } else { 1.0 }, 0.0);
    }
    let mut binom = CheckReport::with_eps("tree-binomial", format!("trees ≤ {max_tree}, all l"), 0.0);
    for tree in catalog.trees_up_to(max_tree) {
        let n = tree.vertex_count();
        for l in 0..=n {
            let got = tree_binomial(tree, l)?;
            let want = BigRational::from_integer(binomial(n, l).into());
            binom.record(|| format!("τ={tree} l={l}"), Scalar::to_f64(&(got - want).abs()), 0.0);
        }
    }
    Ok(vec![coassoc, counit, binom])
}

fn factorisation_report(plan: &LemmaPlan) -> Result<CheckReport, CliError> {
    let max_forest = plan.max_tree - 1;
    let catalog = Catalog::new(max_forest, Alphabet::Unlabelled);
    let mut r = CheckReport::with_eps(
        "forest-factorisation",
        format!("{} character pairs, forests ≤ {max_forest}", plan.characters),
        0.0,
    );
    let forests: Vec<&Forest> = catalog.forests_up_to(max_forest).filter(|f| !f.is_empty()).collect();
    for i in 0..plan.characters {
        let x = random_character(plan.seed.wrapping_add(2 * i), &catalog, 6);
        let y = random_character(plan.seed.wrapping_add(2 * i + 1), &catalog, 6);
        for a in &forests {
            for b in forests.iter().filter(|b| a.vertex_count() + b.vertex_count() <= max_forest) {
                for k in 0..=a.vertex_count() + b.vertex_count() {
                    let o = factorisation_sides(&x, &y, a, b, k)?;
                    let diff = Scalar::to_f64(&(o.lhs - o.rhs).abs());
                    r.record(|| format!("seed {i} τ={a} τ̃={b} k={k}"), diff, 0.0);
                }
            }
        }
    }
    Ok(r)
}

fn star_report(plan: &LemmaPlan, gamma: f64) -> Result<CheckReport, CliError> {
    let max = plan.max_tree - 1;
    let catalog = Catalog::new(max, Alphabet::Unlabelled);
    let mut r = CheckReport::new("star-bound", format!("γ={gamma}, n+k ≤ {max}, β=c_k, {} pairs", plan.characters));
    for i in 0..plan.characters {
        let x = random_character(plan.seed.wrapping_add(1000 + 2 * i), &catalog, 9).to_f64(&catalog)?;
        let y = random_character(plan.seed.wrapping_add(1001 + 2 * i), &catalog, 9).to_f64(&catalog)?;
        for total in 1..=max {
            for k in 0..total {
                let params = NormParams::from_ln_beta(gamma, ln_c_k(k, gamma))?;
                let o = star_norm_bound_check(&x, &y, total - k, k, &params, &catalog)?;
                r.record_log(|| format!("seed {i} n={} k={k}", total - k), o.ln_lhs, o.ln_rhs);
            }
        }
    }
    Ok(r)
}

/// Identity path rescaled as in the main lemma, whose exact Hölder norms are `max 1/τ!`.
fn main_lemma_report(plan: &LemmaPlan, gamma: f64) -> Result<CheckReport, CliError> {
    let n_top = truncation_degree(gamma) + 3;
    let catalog = Catalog::new(n_top, Alphabet::Unlabelled);
    let by_degree = (1..=n_top)
        .map(|k| {
            let best = catalog.trees(k).iter().map(|t| 1.0 / t.factorial_f64()).fold(0.0, f64::max);
            (k, best)
        })
        .collect();
    let norm = Normalisation::new(gamma, &HolderNorms::new(gamma, by_degree))?;
    let path = move |s: f64, t: f64| -> Result<Character<f64>, BoundsError> { Ok(identity_path(t - s, n_top)) };
    let triples = dyadic_triples(plan.level);
    let mut total = CheckReport::with_eps(
        "main-lemma",
        format!("γ={gamma}, n ≤ {n_top}, level {}", plan.level),
        branched::bounds::main_lemma::MAIN_LEMMA_EPS,
    );
    for n in 1..=n_top {
        total.merge(check_main_lemma_remainder(&path, &norm, n, &triples, &catalog)?);
    }
    Ok(total)
}

pub fn lemmas(plan: &LemmaPlan) -> Result<SuiteOutput, CliError> {
    let mut out = SuiteOutput::new("lemmas");
    out.reports.extend(hopf_reports(plan.max_tree)?);
    out.reports.push(factorisation_report(plan)?);
    for &gamma in &plan.gammas {
        out.reports.push(star_report(plan, gamma)?);
    }
    let mut concavity = concavity_sweep(plan.concavity_tree, &plan.concavity_gammas)?;
    concavity.grid = format!("|τ| ≤ {}, γ ∈ {:?}", plan.concavity_tree, plan.concavity_gammas);
    out.reports.push(concavity);
    out.reports.push(counting_sweep(plan.max_tree)?);
    out.reports.extend(check_appendix_lemmas(&LemmaGrid::default())?);
    for &gamma in &plan.gammas {
        out.reports.push(main_lemma_report(plan, gamma)?);
    }
    let constants = plan.gammas.iter().map(|&g| Constants::new(g)).collect::<Result<Vec<_>, _>>()?;
    out.data = json!({ "constants": constants });
    Ok(out)
}

fn source_preset(preset: crate::args::Preset) -> SourceArgs {
    SourceArgs { preset: Some(preset), poly: None, csv: None, samples: 4096, base: 2.0, terms: 8 }
}

/// Every suite at its default size.
pub fn all(seed: u64) -> Result<Vec<SuiteOutput>, CliError> {
    use crate::args::Preset;
    let plan = LemmaPlan {
        gammas: vec![0.5, 1.0],
        concavity_gammas: vec![0.3, 0.5, 0.9],
        max_tree: 7,
        concavity_tree: 8,
        characters: 10,
        level: 3,
        seed,
    };
    let mut outs = vec![lemmas(&plan)?];
    for (s, t) in [("0", "1"), ("1/4", "3/4")] {
        let mut o = extend_cmd(&ExtendArgs {
            source: source_preset(Preset::Identity),
            truncation: 1,
            degree: 4,
            s: s.into(),
            t: t.into(),
            tol: 1e-10,
            min_level: 3,
            max_level: 12,
            agree_tol: 1e-8,
        })?;
        o.name = format!("extend-identity-{}", if s == "0" { "0-1" } else { "quarter" });
        outs.push(o);
    }
    let mut plane_lift = lift(&LiftArgs {
        source: source_preset(Preset::Plane),
        degree: 4,
        gamma: 1.0,
        tol: 2e-7,
        max_level: 12,
        s: "0".into(),
        t: "1".into(),
        compare: true,
        agree_tol: 1e-6,
        chen_tol: 1e-5,
    })?;
    plane_lift.name = "lift-plane".into();
    outs.push(plane_lift);
    for (preset, crossover, gamma) in [(Preset::Identity, false, 1.0), (Preset::Plane, false, 1.0), (Preset::Plane, true, 0.75)] {
        let mut o = verify_decay_cmd(&DecayArgs {
            source: source_preset(preset),
            gamma,
            degree: 6,
            level: 4,
            tol: 1e-8,
            crossover,
        })?;
        o.name = format!("decay-{}-{gamma}", if preset == Preset::Identity { "identity" } else { "plane" });
        outs.push(o);
    }
    outs.push(counterexample(&CounterexampleArgs { gamma: 0.5, beta: 2.0, a: 0.5, b: 1.0, n_max: 200 })?);
    Ok(outs)
}
