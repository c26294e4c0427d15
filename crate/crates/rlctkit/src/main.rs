//! Command-line front end: parse polynomials, run blow-up algorithms,
//! export trees, bounds, weights, and model-comparison CSVs.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 resource cap reached,
//! 3 internal invariant violation.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rlctkit::blowup::{self, Caps, SelectiveOutcome};
use rlctkit::error::Error;
use rlctkit::parse::{parse_polynomial_any, parse_rat_list};
use rlctkit::rational::{format_rat, Lambda, Rat};
use rlctkit::{
    binomial, bound, lp, models, GeneralPolynomial, OuterMonomial, Result, SopPolynomial,
};

#[derive(Parser)]
#[command(
    name = "rlctkit",
    about = "Exact RLCTs of sop polynomials via blow-up trees, and LP simplex upper bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact RLCT of a non-negative sop binomial.
    Rlct(RlctArgs),
    /// Simplex upper bound (LP over multi-indexes) of any polynomial.
    Bound(BoundArgs),
    /// Build a blow-up tree and export it.
    Tree(TreeArgs),
    /// Optimal weighted-blow-up weight from the LP optimum.
    Weight(WeightArgs),
    /// Compare a model's known RLCT with its simplex upper bound over H.
    ModelCompare(ModelCompareArgs),
    /// Exhaustive binomial sweep checking closed form = tree = LP.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct PolyInput {
    /// Polynomial: text (`w1^2 + w2^4`), JSON, or `@path` to a file.
    polynomial: String,
    /// Outer monomial exponents s as comma-separated rationals (default all 1).
    #[arg(long)]
    s: Option<String>,
}

impl PolyInput {
    fn read(&self) -> Result<(GeneralPolynomial, OuterMonomial)> {
        let text = match self.polynomial.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?,
            None => self.polynomial.clone(),
        };
        let s = self.s.as_deref().map(parse_rat_list).transpose()?;
        let min_vars = s.as_ref().map_or(0, Vec::len);
        let poly = parse_polynomial_any(&text, min_vars)?;
        let outer = match s {
            Some(mut s) => {
                if s.len() < poly.var_count() {
                    return Err(Error::Invalid(format!(
                        "--s has {} entries but the polynomial uses {} variables",
                        s.len(),
                        poly.var_count()
                    )));
                }
                s.truncate(poly.var_count().max(min_vars));
                OuterMonomial::new(s)?
            }
            None => OuterMonomial::trivial(poly.var_count()),
        };
        Ok((poly, outer))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RlctMethod {
    Closed,
    Tree,
    Both,
}

#[derive(Args)]
struct RlctArgs {
    #[command(flatten)]
    input: PolyInput,
    #[arg(long, value_enum, default_value = "both")]
    method: RlctMethod,
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: TextOrJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    input: PolyInput,
    /// Translate to `f(w + p)` first: comma-separated rationals.
    #[arg(long)]
    translate: Option<String>,
    /// Then substitute `w = Pinv u`: rows separated by `;`, entries by `,`.
    #[arg(long)]
    transform: Option<String>,
    #[arg(long)]
    pivot_cap: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeAlgorithm {
    BetweenVars,
    BetweenTerms,
    LocalNc,
    MinDeg,
    MaxDeg,
}

#[derive(Args)]
struct TreeArgs {
    #[command(flatten)]
    input: PolyInput,
    #[arg(long, value_enum)]
    algorithm: TreeAlgorithm,
    /// Write a Graphviz DOT file here.
    #[arg(long)]
    dot: Option<String>,
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: TextOrJson,
}

#[derive(Args)]
struct WeightArgs {
    #[command(flatten)]
    input: PolyInput,
    /// Also print the chart polynomial of the weighted blow-up (1-indexed).
    #[arg(long)]
    chart: Option<usize>,
    #[arg(long)]
    pivot_cap: Option<usize>,
}

#[derive(Args)]
struct ModelCompareArgs {
    /// Model spec JSON, e.g. `{"model":"rrr","M":5,"N":5,"H":3,"r":2}`.
    #[arg(long)]
    spec: String,
    #[arg(long)]
    h_min: Option<u32>,
    #[arg(long)]
    h_max: Option<u32>,
    /// Cap on the monomial count of a model expansion.
    #[arg(long, default_value_t = models::DEFAULT_TERM_CAP)]
    term_cap: usize,
    #[arg(long)]
    pivot_cap: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Variable count of the swept binomials.
    #[arg(long, default_value_t = 2)]
    vars: usize,
    /// Largest (even) exponent in the sweep.
    #[arg(long, default_value_t = 8)]
    max_exp: u64,
    /// Prior exponents cycled through the sweep, comma-separated rationals.
    #[arg(long, default_value = "1,1/2,2")]
    s_choices: String,
    /// Patterns of s drawn per binomial (the all-ones vector plus rotations).
    #[arg(long, default_value_t = 2)]
    s_patterns: usize,
    #[arg(long)]
    max_nodes: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Rlct(args) => cmd_rlct(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Tree(args) => cmd_tree(args),
        Command::Weight(args) => cmd_weight(args),
        Command::ModelCompare(args) => cmd_model_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse(_) | Error::Invalid(_) => 1,
                Error::NodeCap(_) | Error::PivotCap(_) | Error::TermCap { .. } => 2,
                Error::Internal(_) => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn node_caps(cli_value: Option<usize>) -> Caps {
    let from_env = || {
        std::env::var("RLCTKIT_MAX_NODES")
            .ok()
            .and_then(|v| v.parse().ok())
    };
    match cli_value.or_else(from_env) {
        Some(n) => Caps::new(n),
        None => Caps::default(),
    }
}

fn to_sop(poly: &GeneralPolynomial, nonneg: bool) -> Result<SopPolynomial> {
    poly.to_sop(nonneg)
}

fn cmd_rlct(args: RlctArgs) -> Result<ExitCode> {
    let (poly, outer) = args.input.read()?;
    if poly.term_count() != 2 {
        return Err(Error::Invalid(format!(
            "`rlct` computes exact RLCTs of binomials only ({} terms given); \
             use `rlctkit bound` for the simplex upper bound of a general polynomial",
            poly.term_count()
        )));
    }
    let f = to_sop(&poly, true)?;
    let caps = node_caps(args.max_nodes);
    let value = match args.method {
        RlctMethod::Closed => binomial::rlct_binomial(&f, &outer)?,
        RlctMethod::Tree => binomial::rlct_via_tree(&f, &outer, caps)?,
        RlctMethod::Both => {
            let closed = binomial::rlct_binomial(&f, &outer)?;
            let tree = binomial::rlct_via_tree(&f, &outer, caps)?;
            if closed.lambda != tree.lambda {
                return Err(Error::Internal(format!(
                    "closed form gave {} but the tree gave {}",
                    closed.lambda, tree.lambda
                )));
            }
            tree
        }
    };
    match args.format {
        TextOrJson::Json => {
            let mut obj = json!({"lambda": value.lambda.to_string()});
            if let Some(m) = value.multiplicity {
                obj["multiplicity"] = json!(m);
            }
            println!("{obj}");
        }
        TextOrJson::Text => match value.multiplicity {
            Some(m) => println!("lambda = {} (multiplicity {m})", value.lambda),
            None => println!("lambda = {}", value.lambda),
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn bound_json(b: &bound::SimplexBound) -> serde_json::Value {
    json!({
        "lambda_smplx": b.lambda_smplx.to_string(),
        "beta": format_rat(&b.beta),
        "alpha": b.alpha.iter().map(format_rat).collect::<Vec<_>>(),
        "weight": b.weight.as_ref().map(|q| {
            q.iter().map(|x| x.to_string().parse::<u64>().ok()).collect::<Vec<_>>()
        }),
    })
}

fn cmd_bound(args: BoundArgs) -> Result<ExitCode> {
    let (mut poly, outer) = args.input.read()?;
    if let Some(p) = args.translate.as_deref() {
        let mut p = parse_rat_list(p)?;
        if p.len() > poly.var_count() {
            return Err(Error::Invalid("--translate has too many entries".into()));
        }
        p.resize(poly.var_count(), Rat::from_integer(0.into()));
        poly = bound::translate(&poly, &p)?;
    }
    if let Some(rows) = args.transform.as_deref() {
        let pinv = rows
            .split(';')
            .map(parse_rat_list)
            .collect::<Result<Vec<_>>>()?;
        poly = bound::linear_transform(&poly, &pinv)?;
    }
    let pivot_cap = args.pivot_cap.unwrap_or(lp::DEFAULT_PIVOT_CAP);
    let mut b = bound::simplex_upper_bound_capped(&poly, &outer, pivot_cap)?;
    if b.lambda_smplx.is_finite() {
        b = bound::optimal_weight_capped(&poly, &outer, pivot_cap)?;
    }
    println!("{}", bound_json(&b));
    Ok(ExitCode::SUCCESS)
}

fn cmd_tree(args: TreeArgs) -> Result<ExitCode> {
    let (poly, outer) = args.input.read()?;
    let caps = node_caps(args.max_nodes);
    let mut exit = ExitCode::SUCCESS;
    let tree = match args.algorithm {
        TreeAlgorithm::BetweenVars => {
            let f = to_sop(&poly, true)?;
            blowup::blowup_between_variables(&f, caps)?
        }
        TreeAlgorithm::BetweenTerms => {
            let f = to_sop(&poly, true)?;
            blowup::blowup_between_terms(&f, &outer, caps)?
        }
        TreeAlgorithm::LocalNc => {
            let f = to_sop(&poly, true)?;
            blowup::local_nc_blowup(&f, &outer, caps)?
        }
        TreeAlgorithm::MinDeg | TreeAlgorithm::MaxDeg => {
            let f = to_sop(&poly, false)?;
            let class = blowup::classify_exclusive_triple(&f)?;
            if class.outside_proven_domain() {
                eprintln!(
                    "note: input is outside the proven halting domains (not in F or G')"
                );
            }
            let outcome = match args.algorithm {
                TreeAlgorithm::MinDeg => blowup::min_degree_selective(&f, caps)?,
                _ => blowup::max_degree_selective(&f, caps)?,
            };
            match outcome {
                SelectiveOutcome::Halted(t) => t,
                SelectiveOutcome::CapReached { partial, cap } => {
                    eprintln!(
                        "non-halting report: node cap {cap} reached; dumping the partial tree"
                    );
                    exit = ExitCode::from(2);
                    partial
                }
            }
        }
    };
    println!(
        "nodes={} leaves={} depth={}",
        tree.len(),
        tree.leaves().len(),
        tree.depth()
    );
    if let Some(path) = args.dot.as_deref() {
        let mut file = std::fs::File::create(path)
            .map_err(|e| Error::Invalid(format!("cannot write {path}: {e}")))?;
        file.write_all(blowup::tree_to_dot(&tree).as_bytes())
            .map_err(|e| Error::Invalid(format!("cannot write {path}: {e}")))?;
    }
    if matches!(args.format, TextOrJson::Json) {
        println!("{}", blowup::tree_to_json(&tree));
    }
    Ok(exit)
}

fn cmd_weight(args: WeightArgs) -> Result<ExitCode> {
    let (poly, outer) = args.input.read()?;
    let pivot_cap = args.pivot_cap.unwrap_or(lp::DEFAULT_PIVOT_CAP);
    let b = bound::optimal_weight_capped(&poly, &outer, pivot_cap)?;
    let q = b.weight.as_ref().expect("finite bound has a weight");
    let mu = bound::minimum_index_ratio(&poly, &outer, q)?;
    let mut obj = json!({
        "q": q.iter().map(|x| x.to_string().parse::<u64>().ok()).collect::<Vec<_>>(),
        "mu": format_rat(&mu),
    });
    if let Some(chart) = args.chart {
        if chart == 0 || chart > poly.var_count() {
            return Err(Error::Invalid("chart index is 1-based".into()));
        }
        let chart_poly = bound::weighted_blowup_chart(&poly, q, chart - 1)?;
        obj["chart"] = json!({"i": chart, "polynomial": chart_poly.to_string()});
    }
    println!("{obj}");
    Ok(ExitCode::SUCCESS)
}

fn lambda_csv(l: &Lambda) -> String {
    l.to_string()
}

fn cmd_model_compare(args: ModelCompareArgs) -> Result<ExitCode> {
    let spec: models::ModelSpec = serde_json::from_str(&args.spec)
        .map_err(|e| Error::Parse(format!("invalid model spec: {e}")))?;
    let h_min = args.h_min.unwrap_or_else(|| spec.default_h().max(1));
    let h_max = args.h_max.unwrap_or_else(|| spec.default_h().max(1));
    if h_min > h_max {
        return Err(Error::Invalid("--h-min exceeds --h-max".into()));
    }
    let pivot_cap = args.pivot_cap.unwrap_or(lp::DEFAULT_PIVOT_CAP);
    println!("H,lambda_rlct,lambda_smplx,param_bound,equal");
    for h in h_min..=h_max {
        let poly = spec.polynomial(h, args.term_cap)?;
        let outer = OuterMonomial::trivial(poly.var_count());
        let b = bound::simplex_upper_bound_capped(&poly, &outer, pivot_cap)?;
        let rlct = spec.rlct(h);
        let param_bound = spec.param_count(h) / Rat::from_integer(2.into());
        let (rlct_s, equal) = match rlct {
            Ok(r) => {
                let eq = b.lambda_smplx == Lambda::Finite(r.clone());
                (format_rat(&r), eq.to_string())
            }
            Err(_) => ("NA".into(), String::new()),
        };
        println!(
            "{h},{rlct_s},{},{},{equal}",
            lambda_csv(&b.lambda_smplx),
            format_rat(&param_bound)
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// Enumerates all even-exponent sop binomial matrices for the sweep and
/// checks the three routes against each other.
fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let d = args.vars;
    if d == 0 || d > 4 {
        return Err(Error::Invalid("sweep supports 1 <= --vars <= 4".into()));
    }
    let s_choices = parse_rat_list(&args.s_choices)?;
    if s_choices.is_empty() {
        return Err(Error::Invalid("--s-choices must be non-empty".into()));
    }
    let caps = node_caps(args.max_nodes);
    let evens: Vec<u64> = (0..=args.max_exp / 2).map(|k| 2 * k).collect();
    let mut count = 0usize;
    let mut checks = 0usize;
    let mut cols = vec![0usize; 2 * d]; // indices into `evens`, column-major
    loop {
        let c1: Vec<u64> = (0..d).map(|h| evens[cols[h]]).collect();
        let c2: Vec<u64> = (0..d).map(|h| evens[cols[d + h]]).collect();
        // Term order does not matter, so only visit c1 < c2.
        if c1 < c2 {
            let f = SopPolynomial::from_u64(&[&c1, &c2], true)?;
            for k in 0..args.s_patterns.max(1) {
                let s: Vec<Rat> = if k == 0 {
                    vec![Rat::from_integer(1.into()); d]
                } else {
                    (0..d)
                        .map(|h| s_choices[(count + h + k) % s_choices.len()].clone())
                        .collect()
                };
                let outer = OuterMonomial::new(s)?;
                let closed = binomial::rlct_binomial(&f, &outer)?.lambda;
                let tree = binomial::rlct_via_tree(&f, &outer, caps)?.lambda;
                let problem = lp::LpProblem::from_exponents(f.matrix(), &outer)?;
                let beta = lp::lp_solve(&problem)?.beta;
                let lp_lambda = Lambda::from_inverse(&beta);
                if closed != tree || closed != lp_lambda {
                    return Err(Error::Internal(format!(
                        "disagreement on {f}: closed {closed}, tree {tree}, lp {lp_lambda}"
                    )));
                }
                checks += 1;
            }
            count += 1;
        }
        // Advance the odometer.
        let mut idx = 0;
        loop {
            if idx == 2 * d {
                println!(
                    "checked {count} binomials ({checks} (f, s) pairs; d={d}, even exponents <= {}): \
                     closed form = tree = LP on every input",
                    args.max_exp
                );
                return Ok(ExitCode::SUCCESS);
            }
            cols[idx] += 1;
            if cols[idx] < evens.len() {
                break;
            }
            cols[idx] = 0;
            idx += 1;
        }
    }
}
