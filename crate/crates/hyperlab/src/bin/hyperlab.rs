//! Thin command-line front end: every subcommand builds a one-experiment
//! scenario (or loads one from a file) and prints the resulting report.
//! Exit codes: 0 all checks pass, 1 a property check failed, 2 bad config.

use clap::{Parser, Subcommand};
use hyperlab::harness::report::{emit_report, to_csv, ReportFormat};
use hyperlab::harness::scenario::{run_scenario, Experiment, ModelDecl, Scenario, Tolerances};
use hyperlab::harness::verify::{verify, Profile};
use hyperlab::harness::Report;
use hyperlab::Error;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hyperlab", about = "numerical experiments on hyperbolic group actions")]
struct Cli {
    /// Scenario seed for sampled experiments.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Directory for report.csv / report.json output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

// Model specs are plain strings: `tree[:rank]`, `word-metric:rank:g1,g2[:radius]`,
// or `plane` (the bundled conjugate Schottky pair). See `parse_model`.
#[derive(Subcommand)]
enum Cmd {
    /// Sampled four-point hyperbolicity estimate.
    DeltaEstimate {
        #[arg(long, default_value = "tree")]
        model: String,
        #[arg(long, default_value_t = 4.0)]
        radius: f64,
        #[arg(long, default_value_t = 2000)]
        count: u64,
        /// Fail if the estimate exceeds this.
        #[arg(long)]
        expect_max: Option<f64>,
    },
    /// Extended Gromov product of two boundary rays.
    Gromov {
        #[arg(long, default_value = "tree")]
        model: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        expect: Option<f64>,
    },
    /// Busemann cocycle of a group element at a boundary ray.
    Busemann {
        #[arg(long, default_value = "tree")]
        model: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "inverse")]
        convention: String,
        #[arg(long)]
        expect: Option<f64>,
    },
    /// Translation length of a group element.
    Length {
        #[arg(long, default_value = "tree")]
        model: String,
        #[arg(long)]
        gamma: String,
        /// auto, trace, or power-difference.
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long)]
        expect: Option<f64>,
    },
    /// Marked length spectrum over a ball.
    Spectrum {
        #[arg(long, default_value = "tree")]
        model: String,
        #[arg(long, default_value_t = 2)]
        radius: u64,
    },
    /// Compare two marked length spectra.
    Compare {
        #[arg(long)]
        model: String,
        #[arg(long)]
        model_b: String,
        #[arg(long, default_value_t = 2)]
        radius: u64,
        #[arg(long)]
        expect: Option<f64>,
    },
    /// Build a sparse candidate rigidity set and check its growth budget.
    RigidSet {
        #[arg(long, default_value = "tree")]
        model: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 1)]
        radius: u64,
        #[arg(long, default_value_t = 2)]
        per_eta: u64,
    },
    /// Witness-set distance between two base points of one model.
    FillingDistance {
        #[arg(long, default_value = "tree")]
        model: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 101.0)]
        k: f64,
    },
    /// Barycenter descent toward a target instance; emits a trace.
    Descent {
        #[arg(long, default_value = "tree")]
        model: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 101.0)]
        k: f64,
        #[arg(long)]
        stop_radius: Option<f64>,
        #[arg(long, default_value_t = 100)]
        max_steps: u64,
    },
    /// Boundary Gromov products compared across two models.
    CompareBoundary {
        #[arg(long)]
        model: String,
        #[arg(long)]
        model_b: String,
        #[arg(long, default_value_t = 6)]
        count: u64,
        #[arg(long, default_value_t = 2)]
        radius: u64,
        #[arg(long)]
        expect: Option<f64>,
    },
    /// Coset relation defect between two models.
    CosetDefect {
        #[arg(long)]
        model: String,
        #[arg(long)]
        model_b: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 6)]
        n: u64,
        #[arg(long, default_value = "inverse")]
        convention: String,
    },
    /// Run the bundled acceptance criteria.
    Verify {
        /// quick or full.
        #[arg(long, default_value = "quick")]
        profile: String,
    },
    /// Run a scenario file (or the bundled `tree-exactness` suite).
    Run {
        #[arg(long)]
        scenario: String,
    },
}

fn parse_model(spec: &str) -> Result<ModelDecl, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    let decl = |kind: &str| ModelDecl {
        kind: kind.into(),
        rank: None,
        generators: None,
        radius: None,
        delta: None,
        base: None,
    };
    match parts[0] {
        "tree" | "free-tree" => {
            let mut d = decl("free-tree");
            d.rank = Some(parts.get(1).map_or(Ok(2), |s| s.parse().map_err(bad))?);
            Ok(d)
        }
        "word-metric" => {
            if parts.len() < 3 {
                return Err(Error::Config("word-metric spec: word-metric:rank:g1,g2[:radius]".into()));
            }
            let mut d = decl("word-metric");
            d.rank = Some(parts[1].parse().map_err(bad)?);
            d.generators = Some(toml::Value::Array(
                parts[2].split(',').map(|g| toml::Value::String(g.into())).collect(),
            ));
            d.radius = Some(parts.get(3).map_or(Ok(6), |s| s.parse().map_err(bad))?);
            Ok(d)
        }
        "plane" => {
            // diag(sqrt 2, 1/sqrt 2) and its conjugate by [[3,1],[1,1]]/sqrt 2
            let mut d = decl("plane");
            let r2 = 2f64.sqrt();
            let g1 = [r2, 0.0, 0.0, 1.0 / r2];
            let g2 = [
                1.5 * r2 - 0.5 / r2,
                -1.5 * r2 + 1.5 / r2,
                0.5 * r2 - 0.5 / r2,
                -0.5 * r2 + 1.5 / r2,
            ];
            d.generators = Some(toml::Value::Array(
                [g1, g2]
                    .iter()
                    .map(|row| toml::Value::Array(row.iter().map(|&v| toml::Value::Float(v)).collect()))
                    .collect(),
            ));
            d.delta = Some(0.75);
            Ok(d)
        }
        other => Err(Error::Config(format!("unknown model spec `{other}`"))),
    }
}

fn bad<E: std::fmt::Display>(e: E) -> Error {
    Error::Config(e.to_string())
}

struct Builder {
    models: BTreeMap<String, ModelDecl>,
    args: toml::Table,
    model: Option<String>,
    model_b: Option<String>,
    op: String,
}

impl Builder {
    fn new(op: &str) -> Self {
        Builder {
            models: BTreeMap::new(),
            args: toml::Table::new(),
            model: None,
            model_b: None,
            op: op.into(),
        }
    }

    fn model(mut self, spec: &str) -> Result<Self, Error> {
        self.models.insert("a".into(), parse_model(spec)?);
        self.model = Some("a".into());
        Ok(self)
    }

    fn model_b(mut self, spec: &str) -> Result<Self, Error> {
        self.models.insert("b".into(), parse_model(spec)?);
        self.model_b = Some("b".into());
        Ok(self)
    }

    fn str(mut self, key: &str, v: &str) -> Self {
        self.args.insert(key.into(), toml::Value::String(v.into()));
        self
    }

    fn f64(mut self, key: &str, v: f64) -> Self {
        self.args.insert(key.into(), toml::Value::Float(v));
        self
    }

    fn int(mut self, key: &str, v: u64) -> Self {
        self.args.insert(key.into(), toml::Value::Integer(v as i64));
        self
    }

    fn opt(mut self, key: &str, v: Option<f64>) -> Self {
        if let Some(v) = v {
            self.args.insert(key.into(), toml::Value::Float(v));
        }
        self
    }

    fn run(self, seed: u64) -> Result<Report, Error> {
        let sc = Scenario {
            seed,
            tolerances: Tolerances::default(),
            output_dir: None,
            models: self.models,
            experiments: vec![Experiment {
                name: self.op.clone(),
                op: self.op,
                model: self.model,
                model_b: self.model_b,
                args: self.args,
            }],
        };
        run_scenario(&sc)
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Error> {
    match &cli.cmd {
        Cmd::DeltaEstimate { model, radius, count, expect_max } => Builder::new("delta-estimate")
            .model(model)?
            .f64("radius", *radius)
            .int("count", *count)
            .opt("expect_max", *expect_max)
            .run(cli.seed),
        Cmd::Gromov { model, x, y, expect } => Builder::new("gromov")
            .model(model)?
            .str("x", x)
            .str("y", y)
            .opt("expect", *expect)
            .run(cli.seed),
        Cmd::Busemann { model, gamma, x, convention, expect } => Builder::new("busemann")
            .model(model)?
            .str("gamma", gamma)
            .str("x", x)
            .str("convention", convention)
            .opt("expect", *expect)
            .run(cli.seed),
        Cmd::Length { model, gamma, method, expect } => Builder::new("length")
            .model(model)?
            .str("gamma", gamma)
            .str("method", method)
            .opt("expect", *expect)
            .run(cli.seed),
        Cmd::Spectrum { model, radius } => {
            Builder::new("spectrum").model(model)?.int("radius", *radius).run(cli.seed)
        }
        Cmd::Compare { model, model_b, radius, expect } => Builder::new("compare")
            .model(model)?
            .model_b(model_b)?
            .int("radius", *radius)
            .opt("expect", *expect)
            .run(cli.seed),
        Cmd::RigidSet { model, gamma, radius, per_eta } => Builder::new("rigid-set")
            .model(model)?
            .str("gamma", gamma)
            .int("radius", *radius)
            .int("per_eta", *per_eta)
            .run(cli.seed),
        Cmd::FillingDistance { model, p, q, k } => Builder::new("filling-distance")
            .model(model)?
            .str("p", p)
            .str("q", q)
            .f64("k", *k)
            .run(cli.seed),
        Cmd::Descent { model, target, start, k, stop_radius, max_steps } => {
            Builder::new("descent")
                .model(model)?
                .str("target", target)
                .str("start", start)
                .f64("k", *k)
                .opt("stop_radius", *stop_radius)
                .int("max_steps", *max_steps)
                .run(cli.seed)
        }
        Cmd::CompareBoundary { model, model_b, count, radius, expect } => {
            Builder::new("compare-boundary")
                .model(model)?
                .model_b(model_b)?
                .int("count", *count)
                .int("radius", *radius)
                .opt("expect", *expect)
                .run(cli.seed)
        }
        Cmd::CosetDefect { model, model_b, h, gamma, n, convention } => {
            Builder::new("coset-defect")
                .model(model)?
                .model_b(model_b)?
                .str("h", h)
                .str("gamma", gamma)
                .int("n", *n)
                .str("convention", convention)
                .run(cli.seed)
        }
        Cmd::Verify { profile } => {
            let p = match profile.as_str() {
                "quick" => Profile::Quick,
                "full" => Profile::Full,
                other => return Err(Error::Config(format!("unknown profile `{other}`"))),
            };
            verify(p)
        }
        Cmd::Run { scenario } => {
            let sc = if scenario == "tree-exactness" {
                Scenario::bundled_tree_exactness()
            } else {
                Scenario::load(std::path::Path::new(scenario))?
            };
            run_scenario(&sc)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(report) => {
            print!("{}", to_csv(&report));
            eprintln!("{} passed, {} failed", report.passed(), report.failed());
            if let Some(dir) = &cli.out {
                for (fmt, name) in
                    [(ReportFormat::Csv, "report.csv"), (ReportFormat::Json, "report.json")]
                {
                    if let Err(e) = emit_report(&report, fmt, &dir.join(name)) {
                        eprintln!("error writing report: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
