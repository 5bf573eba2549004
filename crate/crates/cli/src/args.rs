//! Flag definitions and their translation into core types.

use clap::{Args, Parser, Subcommand, ValueEnum};
use posbound::{Eq2Form, FamilySummary, FormulaVariant, ModelSpec, Tilt};

use crate::UsageError;

/// Fixed default seed so bare invocations are reproducible.
pub const DEFAULT_SEED: u64 = 0xA55C_1A7E;

#[derive(Parser, Debug)]
#[command(
    name = "posbound",
    version,
    about = "Upper bounds for P(X = 0) under positive association, checked against exact and Monte Carlo oracles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate every bound for one model or summary.
    Bound(BoundArgs),
    /// Sweep one parameter and tabulate the bounds.
    Compare(CompareArgs),
    /// Check that the bounds sandwich the exact or simulated probability.
    Verify(VerifyArgs),
    /// Monte Carlo estimate of P(Z = 0) with a Clopper-Pearson interval.
    Mc(McArgs),
    /// Check the moment-generating-function gap lemma on random joint laws.
    LemmaCheck(LemmaArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelName {
    Runs,
    Triangles,
    Ustat,
    #[value(alias = "hypergraph-cover")]
    Hypergraph,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VariantArg {
    #[default]
    FirstPrinciples,
    #[value(alias = "paper-as-printed")]
    Paper,
    Both,
}

impl VariantArg {
    pub fn variants(self) -> Vec<FormulaVariant> {
        match self {
            VariantArg::FirstPrinciples => vec![FormulaVariant::FirstPrinciples],
            VariantArg::Paper => vec![FormulaVariant::PaperAsPrinted],
            VariantArg::Both => vec![FormulaVariant::FirstPrinciples, FormulaVariant::PaperAsPrinted],
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Eq2Arg {
    #[default]
    Printed,
    Standard,
}

impl From<Eq2Arg> for Eq2Form {
    fn from(a: Eq2Arg) -> Self {
        match a {
            Eq2Arg::Printed => Eq2Form::Printed,
            Eq2Arg::Standard => Eq2Form::Standard,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Model selection shared by every model-driven subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Vertex count of K_N (hypergraph).
    #[arg(long = "N")]
    pub big_n: Option<u64>,
    #[arg(long)]
    pub n_draws: Option<u64>,
    /// Linear rather than circular runs.
    #[arg(long)]
    pub linear: bool,
}

impl ModelArgs {
    pub fn spec(&self) -> Result<ModelSpec, UsageError> {
        let model = self.model.ok_or_else(|| UsageError::new("--model is required"))?;
        let need_u = |v: Option<u64>, flag: &str| {
            v.ok_or_else(|| UsageError::new(format!("--{flag} is required for --model {model:?}")))
        };
        let need_p = || {
            self.p
                .ok_or_else(|| UsageError::new(format!("--p is required for --model {model:?}")))
        };
        let spec = match model {
            ModelName::Runs => ModelSpec::Runs {
                n: need_u(self.n, "n")?,
                k: need_u(self.k, "k")?,
                p: need_p()?,
                linear: self.linear,
            },
            ModelName::Triangles => ModelSpec::Triangles { n: need_u(self.n, "n")?, p: need_p()? },
            ModelName::Ustat => ModelSpec::Ustat {
                n: need_u(self.n, "n")?,
                k: need_u(self.k, "k")?,
                p: need_p()?,
            },
            ModelName::Hypergraph => ModelSpec::HypergraphCover {
                big_n: need_u(self.big_n, "N")?,
                k: need_u(self.k, "k")?,
                n_draws: need_u(self.n_draws, "n-draws")?,
            },
        };
        spec.check().map_err(UsageError::from)?;
        Ok(spec)
    }
}

#[derive(Args, Debug, Clone)]
pub struct BoundFlags {
    #[arg(long, value_enum, default_value_t)]
    pub variant: VariantArg,
    #[arg(long = "eq2-form", value_enum, default_value_t)]
    pub eq2_form: Eq2Arg,
    /// Fix t instead of optimizing: a positive real, or `log:<ln t>`.
    #[arg(long, value_parser = parse_tilt)]
    pub t: Option<Tilt>,
}

#[derive(Args, Debug, Clone)]
pub struct McFlags {
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Worker threads for Monte Carlo; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// A FamilySummary as JSON, instead of a model.
    #[arg(long, conflicts_with = "model")]
    pub summary: Option<String>,
    #[command(flatten)]
    pub bound: BoundFlags,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub bound: BoundFlags,
    /// `param=start:stop:count[:geom]` with param in n, k, p, N, n-draws.
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Sweep,
    /// Attach the exact probability where an oracle applies.
    #[arg(long)]
    pub oracle: bool,
    /// Attach a Monte Carlo estimate.
    #[arg(long)]
    pub mc: bool,
    #[command(flatten)]
    pub mc_flags: McFlags,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub bound: BoundFlags,
    /// Use Monte Carlo instead of the exact oracle.
    #[arg(long)]
    pub mc: bool,
    #[command(flatten)]
    pub mc_flags: McFlags,
}

#[derive(Args, Debug)]
pub struct McArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub mc_flags: McFlags,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LawKind {
    /// Each indicator is a random monotone function of m coins.
    #[default]
    Random,
    /// m copies of one Bernoulli(p) indicator.
    Comonotone,
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    /// Number of indicators (and of source coins), at most 10.
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub count: u64,
    #[arg(long, value_enum, default_value_t)]
    pub law: LawKind,
    /// Success probability of the comonotone law.
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
}

pub fn parse_tilt(s: &str) -> Result<Tilt, String> {
    let (tilt, ok) = match s.strip_prefix("log:") {
        Some(rest) => {
            let l: f64 = rest.parse().map_err(|e| format!("bad log t `{rest}`: {e}"))?;
            (Tilt::Log(l), l.is_finite())
        }
        None => {
            let t: f64 = s.parse().map_err(|e| format!("bad t `{s}`: {e}"))?;
            (Tilt::Linear(t), t > 0.0 && t.is_finite())
        }
    };
    if ok {
        Ok(tilt)
    } else {
        Err(format!("t must be positive and finite, got `{s}`"))
    }
}

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    N,
    K,
    P,
    BigN,
    NDraws,
}

impl SweepParam {
    fn parse(s: &str) -> Result<Self, String> {
        Ok(match s {
            "n" => SweepParam::N,
            "k" => SweepParam::K,
            "p" => SweepParam::P,
            "N" => SweepParam::BigN,
            "n-draws" | "n_draws" => SweepParam::NDraws,
            other => return Err(format!("unknown sweep parameter `{other}` (expected n, k, p, N or n-draws)")),
        })
    }

    pub fn is_integer(self) -> bool {
        self != SweepParam::P
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub geometric: bool,
}

pub fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let (name, grid) = s
        .split_once('=')
        .ok_or_else(|| format!("sweep `{s}` is not of the form param=start:stop:count[:geom]"))?;
    let param = SweepParam::parse(name)?;
    let parts: Vec<&str> = grid.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(format!("grid `{grid}` is not start:stop:count[:geom]"));
    }
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("bad grid value `{x}`: {e}"));
    let start = num(parts[0])?;
    let stop = num(parts[1])?;
    let count: usize = parts[2].parse().map_err(|e| format!("bad grid count `{}`: {e}", parts[2]))?;
    let geometric = match parts.get(3) {
        None | Some(&"lin") => false,
        Some(&"geom") => true,
        Some(other) => return Err(format!("grid spacing must be `geom` or `lin`, got `{other}`")),
    };
    if count == 0 {
        return Err("empty grid: count must be at least 1".into());
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err("grid endpoints must be finite".into());
    }
    if geometric && !(start > 0.0 && stop > 0.0) {
        return Err("a geometric grid needs positive endpoints".into());
    }
    Ok(Sweep { param, start, stop, count, geometric })
}

impl Sweep {
    /// Grid points in order; integer parameters are rounded and repeated
    /// points dropped.
    pub fn points(&self) -> Vec<f64> {
        let mut out: Vec<f64> = (0..self.count)
            .map(|i| {
                let f = if self.count == 1 { 0.0 } else { i as f64 / (self.count - 1) as f64 };
                if self.geometric {
                    (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + f * (self.stop - self.start)
                }
            })
            .map(|x| if self.param.is_integer() { x.round() } else { x })
            .collect();
        if self.param.is_integer() {
            out.dedup();
        }
        out
    }

    /// The template `spec` with the swept parameter set to `x`.
    pub fn apply(&self, spec: &ModelSpec, x: f64) -> Result<ModelSpec, UsageError> {
        let missing = || {
            UsageError::new(format!(
                "model {} has no parameter {:?} to sweep",
                spec.name(),
                self.param
            ))
        };
        if self.param.is_integer() && x < 0.0 {
            return Err(UsageError::new(format!("grid value {x} is negative")));
        }
        let u = x as u64;
        let mut out = spec.clone();
        match (&mut out, self.param) {
            (ModelSpec::Runs { n, .. }, SweepParam::N)
            | (ModelSpec::Triangles { n, .. }, SweepParam::N)
            | (ModelSpec::Ustat { n, .. }, SweepParam::N) => *n = u,
            (ModelSpec::Runs { k, .. }, SweepParam::K)
            | (ModelSpec::Ustat { k, .. }, SweepParam::K)
            | (ModelSpec::HypergraphCover { k, .. }, SweepParam::K) => *k = u,
            (ModelSpec::Runs { p, .. }, SweepParam::P)
            | (ModelSpec::Triangles { p, .. }, SweepParam::P)
            | (ModelSpec::Ustat { p, .. }, SweepParam::P) => *p = x,
            (ModelSpec::HypergraphCover { big_n, .. }, SweepParam::BigN) => *big_n = u,
            (ModelSpec::HypergraphCover { n_draws, .. }, SweepParam::NDraws) => *n_draws = u,
            _ => return Err(missing()),
        }
        out.check().map_err(UsageError::from)?;
        Ok(out)
    }
}

/// Parses and validates a summary given on the command line.
pub fn parse_summary(text: &str) -> Result<FamilySummary, UsageError> {
    let s = FamilySummary::from_json(text).map_err(UsageError::from)?;
    let violations = s.validate();
    if !violations.is_empty() {
        let all: Vec<String> = violations
            .iter()
            .map(|v| format!("invariant `{}` violated: {}", v.invariant, v.detail))
            .collect();
        return Err(UsageError::new(format!("inconsistent summary: {}", all.join("; "))));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tilt_forms() {
        assert_eq!(parse_tilt("0.5"), Ok(Tilt::Linear(0.5)));
        assert_eq!(parse_tilt("log:-690"), Ok(Tilt::Log(-690.0)));
        assert!(parse_tilt("0").is_err());
        assert!(parse_tilt("-1").is_err());
        assert!(parse_tilt("log:nan").is_err());
    }

    #[test]
    fn sweep_grids() {
        let s = parse_sweep("p=0.001:0.3:10:geom").unwrap();
        let pts = s.points();
        assert_eq!(pts.len(), 10);
        assert!((pts[0] - 0.001).abs() < 1e-15 && (pts[9] - 0.3).abs() < 1e-12);
        let s = parse_sweep("n-draws=100:400:3:geom").unwrap();
        assert_eq!(s.points(), vec![100.0, 200.0, 400.0]);
        let s = parse_sweep("n=1:3:9").unwrap();
        assert_eq!(s.points(), vec![1.0, 2.0, 3.0]);
        assert!(parse_sweep("p=0:1:0").is_err());
        assert!(parse_sweep("q=0:1:3").is_err());
        assert!(parse_sweep("p=0:1:3:geom").is_err());
        assert!(parse_sweep("p=0:1").is_err());
    }

    #[test]
    fn sweep_rejects_foreign_parameter() {
        let s = parse_sweep("N=4:6:3").unwrap();
        let spec = ModelSpec::Ustat { n: 5, k: 2, p: 0.1 };
        assert!(s.apply(&spec, 4.0).is_err());
    }
}
