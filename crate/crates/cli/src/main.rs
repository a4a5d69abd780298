use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use eqloc::homalg::Ring;
use eqloc::orbitcat::{subgroup_labels, OrbitCategory};
use eqloc_cli::scenario::coarse_report;
use eqloc_cli::{random_spaces, run, run_batch, Inputs, Options, Report, Scenario, Task};

#[derive(Parser)]
#[command(name = "eqloc", version, about = "Exact checks for equivariant localization on finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Bar-complex truncation (default: dim X + 2)
    #[arg(long = "truncate", global = true, value_name = "k")]
    truncate: Option<usize>,
    /// Coefficient ring for constant coefficients
    #[arg(long, global = true, value_enum)]
    ring: Option<RingArg>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    out: OutArg,
    /// Worker threads for scenario batches
    #[arg(long, global = true, default_value_t = 1, value_name = "n")]
    jobs: usize,
    /// Seed for stress-test generation
    #[arg(long, global = true, value_name = "s")]
    seed: Option<u64>,
    /// Include wall-clock time in reports
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Zz,
    Qq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario files
    Verify {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
    },
    /// Bredon homology of a complex by the coend and cellular models
    Homology {
        #[arg(long)]
        group: String,
        #[arg(long)]
        complex: String,
        #[arg(long, default_value = "constant:Z")]
        coefficients: String,
        #[arg(long)]
        subdivide: bool,
    },
    /// Character table of a group
    Chartab {
        #[arg(long)]
        group: String,
    },
    /// Element of R(G) vanishing on H with nonzero trace at gamma
    SegalElement {
        #[arg(long)]
        group: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        subgroup: String,
    },
    /// Objects and hom-set sizes of the orbit category
    Orbitcat {
        #[arg(long)]
        group: String,
    },
    /// Coarse-space lemma checks on the built-in battery, a space file or
    /// random spaces
    CoarseCheck {
        #[arg(long, requires = "group")]
        space: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// Number of random spaces (seeded by --seed, default 0)
        #[arg(long)]
        random: Option<usize>,
    },
}

fn emit(reports: &[Report], out: OutArg) {
    match out {
        OutArg::Json => {
            let value = if reports.len() == 1 {
                serde_json::to_value(&reports[0])
            } else {
                serde_json::to_value(reports)
            };
            println!("{}", serde_json::to_string_pretty(&value.expect("reports serialize")).expect("json"));
        }
        OutArg::Text => {
            for r in reports {
                print!("{}", r.to_text());
            }
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1; 2 is reserved for theorem violations.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let options = Options {
        truncate: cli.truncate,
        ring: cli.ring.map(|r| match r {
            RingArg::Zz => Ring::ZZ,
            RingArg::Qq => Ring::QQ,
        }),
        timing: cli.timing,
    };
    let here = Inputs::new(".");
    let reports = match cli.command {
        Command::Verify { scenarios } => match run_batch(&scenarios, &options, cli.jobs) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
        },
        Command::Homology {
            group,
            complex,
            coefficients,
            subdivide,
        } => {
            let mut s = Scenario::new(Task::Homology);
            s.group = Some(group);
            s.complex = Some(complex);
            s.coefficients = Some(coefficients);
            s.subdivide = subdivide;
            vec![run(&s, &here, &options)]
        }
        Command::Chartab { group } => {
            let mut s = Scenario::new(Task::Chartab);
            s.group = Some(group);
            vec![run(&s, &here, &options)]
        }
        Command::SegalElement { group, gamma, subgroup } => {
            let mut s = Scenario::new(Task::SegalElement);
            s.group = Some(group);
            s.gamma = Some(json!(gamma));
            s.subgroup = Some(subgroup);
            vec![run(&s, &here, &options)]
        }
        Command::Orbitcat { group } => vec![orbitcat(&here, &group)],
        Command::CoarseCheck { space, group, random } => {
            let mut s = Scenario::new(Task::CoarseAxioms);
            s.space = space;
            s.group = group;
            match (random, cli.seed.unwrap_or(0)) {
                (Some(n), seed) => {
                    let mut r = Report::new(json!({ "task": "coarse-axioms", "random": n, "seed": seed }));
                    if let Err(e) = random_spaces(n, seed).and_then(|spaces| coarse_report(&spaces, &mut r)) {
                        r.error = Some(eqloc_cli::report::ErrorReport {
                            kind: "InputError".into(),
                            message: format!("{e:#}"),
                        });
                    }
                    vec![r]
                }
                _ => vec![run(&s, &here, &options)],
            }
        }
    };
    emit(&reports, cli.out);
    let code = reports.iter().map(Report::exit_code).max().unwrap_or(0);
    ExitCode::from(code as u8)
}

fn orbitcat(inputs: &Inputs, group: &str) -> Report {
    let mut r = Report::new(json!({ "task": "orbitcat", "group": group }));
    let result = inputs.group(group).and_then(|g| {
        let o = OrbitCategory::new(g.clone())?;
        let labels = subgroup_labels(&g, o.lattice());
        let dump = o.category().dump();
        let laws = o.category().check_laws().is_ok() && o.check_payload_composition();
        r.expect("category-laws", laws, eqloc_cli::Verdict::Fail, "");
        let mut text = String::from("  objects ");
        text.push_str(&labels.iter().map(|l| format!("G/{l}")).collect::<Vec<_>>().join(" "));
        text.push('\n');
        for (a, row) in dump.hom_sizes.iter().enumerate() {
            text.push_str(&format!("  |Hom(G/{}, -)| {:?}\n", labels[a], row));
        }
        r.details = json!({ "labels": labels, "category": dump, "text": text });
        Ok(())
    });
    if let Err(e) = result {
        r.error = Some(eqloc_cli::report::ErrorReport {
            kind: "InputError".into(),
            message: format!("{e:#}"),
        });
    }
    r
}
