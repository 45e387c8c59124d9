use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corrcheck_core::Caps;

use corrcheck_cli::report::SuiteReport;
use corrcheck_cli::run::{self, CatSource, RunError};

/// Certificate-producing checks over finite categories: spans, pullbacks,
/// Segal levels, fibration classification, Grothendieck constructions and
/// Beck-Chevalley conditions.
#[derive(Parser)]
#[command(name = "corrcheck", version)]
struct Cli {
    /// Cap on objects per user-supplied category.
    #[arg(long, global = true)]
    max_objects: Option<usize>,
    /// Cap on morphisms per user-supplied category.
    #[arg(long, global = true)]
    max_morphisms: Option<usize>,
    /// Cap on twisted-arrow / Segal levels.
    #[arg(long, global = true)]
    max_level: Option<usize>,
    /// Write the machine-readable report here instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Record wall-clock timings in the report (breaks byte-for-byte
    /// determinism across runs).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// A shipped fixture: d12, z2, finset3, walking-arrow, lambda20,
    /// walking-square.
    #[arg(long)]
    fixture: Option<String>,
    /// A bundle file.
    #[arg(long)]
    bundle: Option<PathBuf>,
    /// Category name inside the bundle (defaults to the first).
    #[arg(long)]
    cat: Option<String>,
}

impl From<&SourceArgs> for CatSource {
    fn from(a: &SourceArgs) -> CatSource {
        CatSource { fixture: a.fixture.clone(), bundle: a.bundle.clone(), cat: a.cat.clone() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate every category law, reporting each violation with a witness.
    Validate {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Compute the chosen pullback of a cospan, or certify its absence.
    Pullback {
        #[command(flatten)]
        source: SourceArgs,
        /// Left leg of the cospan (a morphism name).
        #[arg(long)]
        left: String,
        /// Right leg of the cospan (a morphism name).
        #[arg(long)]
        right: String,
    },
    /// Compose two spans through the chosen pullback.
    ComposeSpans {
        #[command(flatten)]
        source: SourceArgs,
        /// First span, as left,apex,right or legs:LEFT;RIGHT.
        #[arg(long)]
        first: String,
        /// Second span.
        #[arg(long)]
        second: String,
    },
    /// Check the Segal condition at a level.
    Segal {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Classify a fibration: lifts, two-sidedness, bifibration, bivariance,
    /// Beck-Chevalley.
    ClassifyFib {
        /// kind:fixture, with kind one of span, arrow, cocyl-id, groth-hom.
        #[arg(long)]
        fib: String,
    },
    /// Run the two-sided Grothendieck construction and classify the result.
    Groth {
        /// Use the hom-valued functor of a fixture.
        #[arg(long)]
        hom_of: Option<String>,
        /// Bundle holding a cat_valued entry.
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// Name of the cat_valued entry.
        #[arg(long)]
        cat_valued: Option<String>,
    },
    /// Check the Beck-Chevalley condition for a bivariant fibration.
    Bc {
        /// kind:fixture, as in classify-fib.
        #[arg(long)]
        fib: String,
    },
    /// Build the Beck-Chevalley square of counit 2-cells for a cartesian
    /// square and verify it is cartesian in the slice.
    BcSquare {
        #[command(flatten)]
        source: SourceArgs,
        /// Corners w,x,y,s (unique arrows) or legs:TL;TR;CL;CR.
        #[arg(long)]
        square: String,
    },
    /// Adjunction witnesses: ambidextrous adjoints of a span, or the
    /// generator adjunction of an arrow.
    Adjoint {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        span: Option<String>,
        #[arg(long)]
        arrow: Option<String>,
    },
    /// Compute the dual of a span and the comparison iso to its reverse.
    Dual {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        span: String,
    },
    /// Verify the self-duality zig-zags for one object or all objects.
    Zigzag {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        object: Option<String>,
    },
    /// Run the full acceptance battery.
    Suite,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut caps = Caps::default();
    if let Some(m) = cli.max_objects {
        caps.max_objects = m;
    }
    if let Some(m) = cli.max_morphisms {
        caps.max_morphisms = m;
    }
    if let Some(m) = cli.max_level {
        caps.max_level = m;
    }

    let started = std::time::Instant::now();
    let outcome: Result<SuiteReport, RunError> = match &cli.command {
        Command::Validate { source } => {
            run::validate_check(&source.into(), &caps).map(SuiteReport::new)
        }
        Command::Pullback { source, left, right } => {
            run::pullback_check(&source.into(), left, right, &caps).map(SuiteReport::new)
        }
        Command::ComposeSpans { source, first, second } => {
            run::compose_spans_check(&source.into(), first, second, &caps).map(SuiteReport::new)
        }
        Command::Segal { source, n } => {
            run::segal_subcheck(&source.into(), *n, &caps).map(SuiteReport::new)
        }
        Command::ClassifyFib { fib } => run::classify_fib_check(fib, &caps).map(SuiteReport::new),
        Command::Groth { hom_of, bundle, cat_valued } => {
            run::groth_check(hom_of.as_deref(), bundle.as_ref(), cat_valued.as_deref(), &caps)
                .map(SuiteReport::new)
        }
        Command::Bc { fib } => run::bc_check(fib, &caps).map(SuiteReport::new),
        Command::BcSquare { source, square } => {
            run::bc_square_check(&source.into(), square, &caps).map(SuiteReport::new)
        }
        Command::Adjoint { source, span, arrow } => {
            run::adjoint_check(&source.into(), span.as_deref(), arrow.as_deref(), &caps)
                .map(SuiteReport::new)
        }
        Command::Dual { source, span } => {
            run::dual_check(&source.into(), span, &caps).map(SuiteReport::new)
        }
        Command::Zigzag { source, object } => {
            run::zigzag_check(&source.into(), object.as_deref(), &caps).map(SuiteReport::new)
        }
        Command::Suite => Ok(run::suite_report(&caps)),
    };

    match outcome {
        Ok(mut report) => {
            if cli.timing {
                let elapsed = started.elapsed().as_millis();
                for check in &mut report.checks {
                    check.timing_ms = Some(elapsed);
                }
            }
            let rendered = report.render();
            match &cli.report {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered + "\n") {
                        eprintln!("cannot write report: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => println!("{rendered}"),
            }
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
