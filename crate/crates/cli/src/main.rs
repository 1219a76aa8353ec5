use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use smforge::combinators::{lr, rl};
use smforge::decide::{decide_accept_m1, decide_accept_m1_with_bound, Decision};
use smforge::diagram::{area_table, disk_diagram, ratios_within, trapezium, un_diagram, write_cells, write_dot, Diagram, CellKind};
use smforge::format::{parse_machine, parse_trace, write_machine, write_trace};
use smforge::metrics::MetricParams;
use smforge::presentation::{add_disks, presentation_g, presentation_m, presentation_omega, write_flat, write_presentation};
use smforge::search::{bounded_accept, SearchBudget, SearchOutcome};
use smforge::tower::*;
use smforge::verify::{run_suite, write_rows};
use smforge::{Error, FreeWord, Machine};

mod plot;

#[derive(Parser)]
#[command(name = "smforge", version, about = "S-machines, their presentations and diagrams")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Tower parameters: a TOML file with `alphabet`, `n`, `k`, `L`; flags override it.
#[derive(clap::Args, Clone, Debug)]
struct ParamArgs {
    #[arg(long)]
    params: Option<PathBuf>,
    /// Letters of the alphabet, e.g. `ab`.
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "l", id = "big_l")]
    l: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<TowerParams> {
        let mut p = match &self.params {
            Some(path) => TowerParams::from_toml(&read(path)?)?,
            None => TowerParams::default(),
        };
        if let Some(a) = &self.alphabet {
            p.alphabet = a.chars().map(|c| c.to_string()).collect();
        }
        p.n = self.n.unwrap_or(p.n);
        p.k = self.k.unwrap_or(p.k);
        p.l = self.l.unwrap_or(p.l);
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MachineKind {
    M1,
    M2,
    M3,
    M4,
    M51,
    M52,
    M,
    Lr,
    Rl,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Group {
    M,
    G,
    GOmega,
    Disk,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresentationFormat {
    Text,
    Flat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DiagramKind {
    Trapezium,
    Disk,
    Un,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Export {
    Dot,
    Flat,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the spec of a machine of the tower.
    Build {
        #[arg(long, value_enum)]
        machine: MachineKind,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Run a history from an input configuration and print the trace.
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, conflicts_with = "trace")]
        input: Option<String>,
        /// Space separated rule ids; `^-1` marks inverse rules.
        #[arg(long, requires = "input")]
        history: Option<String>,
        /// Re-check a recorded trace.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Search for an accepting computation (exit 0 accepted, 1 rejected, 2 incomplete).
    Accept {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        input: String,
        /// History length bound; with `--complete-m1` it defaults to the complete bound.
        #[arg(long, required_unless_present = "complete_m1")]
        bound: Option<usize>,
        /// Complete decision for M1; with a bound below the complete one only acceptance is conclusive.
        #[arg(long)]
        complete_m1: bool,
    },
    /// Emit a group presentation.
    Present {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, value_enum, default_value = "g")]
        group: Group,
        /// Extra relator words for `g-omega`.
        #[arg(long = "relator")]
        relators: Vec<String>,
        /// Accepting traces for `disk`.
        #[arg(long = "trace")]
        traces: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: PresentationFormat,
    },
    /// Build a diagram from a trace (trapezium, disk) or a word (un).
    Diagram {
        #[arg(long, value_enum)]
        kind: DiagramKind,
        /// Trace file for `trapezium` and `disk`, a word for `un`.
        #[arg(long = "in")]
        input: String,
        /// Machine file for `trapezium` and `disk`; `un` builds M from the parameters.
        #[arg(long)]
        machine: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        metrics: bool,
        #[arg(long, value_enum)]
        export: Option<Export>,
        /// Where the export goes; standard output by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Areas of u^n diagrams against |u|^2 (exit 1 if the ratios drift by more than 2x).
    BenchArea {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        lengths: Vec<usize>,
        /// Directory for `area.tsv` and `area.svg`.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a check suite: core, m1, m2, m3, m, metrics, diagrams.
    VerifyLemmas {
        suite: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_machine(path: &Path) -> Result<Machine> {
    Ok(Machine::new(parse_machine(&read(path)?)?)?)
}

fn build(kind: MachineKind, p: &TowerParams) -> smforge::Result<smforge::MachineSpec> {
    match kind {
        MachineKind::M1 => m1_spec(&p.alphabet, p.n),
        MachineKind::M2 => m2_spec(&p.alphabet, p.n, p.k),
        MachineKind::M3 => m3_spec(&p.alphabet, p.n, p.k),
        MachineKind::M4 => m4_spec(&p.alphabet, p.n, p.k),
        MachineKind::M51 => m51_spec(p),
        MachineKind::M52 => m52_spec(p),
        MachineKind::M => m_spec(p),
        MachineKind::Lr => lr(&p.alphabet),
        MachineKind::Rl => rl(&p.alphabet),
    }
}

/// Header lines of a report: command, parameters and timing.
fn report_header(command: &str, p: &TowerParams, started: Instant, complete: bool) -> String {
    format!(
        "# command {command}\n# params alphabet={} n={} k={} L={}\n# elapsed_ms {}\n# complete {complete}\n",
        p.alphabet.join(""),
        p.n,
        p.k,
        p.l,
        started.elapsed().as_millis()
    )
}

fn diagram_metrics(d: &Diagram) -> String {
    let mp = MetricParams::default();
    let w = d.weight(&mp);
    let mut out = format!("# delta {} C1 {} J {}\n", mp.delta, mp.c1, mp.j);
    out += &format!("# area {}\n", d.area());
    for k in [CellKind::ThetaQ, CellKind::ThetaA, CellKind::Hub, CellKind::Disk, CellKind::ACell] {
        out += &format!("# cells {} {}\n", k.as_str(), d.count(k));
    }
    out += &format!("# theta_bands {}\n", d.bands.len());
    out += &format!("# weight {} ({:.3})\n", w, *w.numer() as f64 / *w.denom() as f64);
    let n = d.necklace();
    out += &format!("# necklace white {} black {} mixture {}\n", n.whites(), n.blacks(), d.mixture(&mp));
    let rep = d.check();
    out += &format!("# structure {}\n", if rep.is_ok() { "ok".to_string() } else { rep.problems.join("; ") });
    out
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Build { machine, params } => {
            let p = params.resolve()?;
            let spec = build(machine, &p)?;
            // validate before printing
            Machine::new(spec.clone())?;
            print!("{}", write_machine(&spec));
        }
        Cmd::Run { machine, input, history, trace } => {
            let m = load_machine(&machine)?;
            let c = match (input, trace) {
                (Some(x), None) => {
                    let w0 = m.input_configuration(&FreeWord::parse(&x)?)?;
                    let h = m.parse_history(history.as_deref().unwrap_or(""))?;
                    match m.run(&w0, &h) {
                        Ok(c) => c,
                        Err(e @ Error::FailsAtStep { .. }) => {
                            eprintln!("{e}");
                            return Ok(ExitCode::from(1));
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                (None, Some(t)) => parse_trace(&m, &read(&t)?)?,
                _ => bail!("give --input (with --history) or --trace"),
            };
            print!("{}", write_trace(&m, &c));
        }
        Cmd::Accept { machine, input, bound, complete_m1 } => {
            let m = load_machine(&machine)?;
            let w0 = m.input_configuration(&FreeWord::parse(&input)?)?;
            if complete_m1 {
                let decision = match bound {
                    Some(b) => decide_accept_m1_with_bound(&m, &w0, b),
                    None => decide_accept_m1(&m, &w0),
                };
                match decision {
                    Ok(Decision::Accepted { witness, .. }) => {
                        print!("{}", write_trace(&m, &witness));
                        return Ok(ExitCode::SUCCESS);
                    }
                    Ok(Decision::Rejected(cert)) => {
                        println!("# rejected: {cert}");
                        return Ok(ExitCode::from(1));
                    }
                    Ok(Decision::Incomplete(why)) => {
                        println!("# incomplete: {why}");
                        return Ok(ExitCode::from(2));
                    }
                    Err(e @ Error::BudgetExceeded { .. }) => {
                        println!("# incomplete: {e}");
                        return Ok(ExitCode::from(2));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            match bounded_accept(&m, &w0, &SearchBudget::new(bound.unwrap_or(0)))? {
                SearchOutcome::Accepted(c) => print!("{}", write_trace(&m, &c)),
                SearchOutcome::Rejected { explored } => {
                    println!("# rejected: all {explored} reachable words visited");
                    return Ok(ExitCode::from(1));
                }
                SearchOutcome::Incomplete { explored, reason } => {
                    println!("# incomplete after {explored} words: {reason}");
                    return Ok(ExitCode::from(2));
                }
            }
        }
        Cmd::Present { machine, group, relators, traces, format } => {
            let m = load_machine(&machine)?;
            let p = match group {
                Group::M => presentation_m(&m),
                Group::G => presentation_g(&m)?,
                Group::GOmega => {
                    let words = relators.iter().map(|r| FreeWord::parse(r)).collect::<smforge::Result<Vec<_>>>()?;
                    presentation_omega(&m, words)?
                }
                Group::Disk => {
                    let mut p = presentation_g(&m)?;
                    let mut configs = Vec::new();
                    for t in &traces {
                        let c = parse_trace(&m, &read(t)?)?;
                        configs.push((c.initial().clone(), c.history));
                    }
                    add_disks(&mut p, &m, configs)?;
                    p
                }
            };
            match format {
                PresentationFormat::Text => print!("{}", write_presentation(&p)),
                PresentationFormat::Flat => print!("{}", write_flat(&p)),
            }
        }
        Cmd::Diagram { kind, input, machine, params, metrics, export, out } => {
            let d = match kind {
                DiagramKind::Trapezium | DiagramKind::Disk => {
                    let Some(path) = machine else { bail!("--machine is needed for trapezium and disk diagrams") };
                    let m = load_machine(&path)?;
                    let c = parse_trace(&m, &read(Path::new(&input))?)?;
                    match kind {
                        DiagramKind::Trapezium => trapezium(&m, &c)?,
                        _ => disk_diagram(&m, &c)?,
                    }
                }
                DiagramKind::Un => {
                    let p = params.resolve()?;
                    let m = build_m(&p)?;
                    un_diagram(&m, &p, &FreeWord::parse(&input)?)?
                }
            };
            if metrics {
                print!("{}", diagram_metrics(&d));
            }
            if let Some(e) = export {
                let text = match e {
                    Export::Dot => write_dot(&d),
                    Export::Flat => write_cells(&d),
                };
                match out {
                    Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                    None => print!("{text}"),
                }
            }
            if !metrics && export.is_none() {
                println!("area {}", d.area());
            }
        }
        Cmd::BenchArea { params, lengths, out_dir } => {
            let started = Instant::now();
            let p = params.resolve()?;
            let m = build_m(&p)?;
            let rows = area_table(&m, &p, &lengths)?;
            let ok = ratios_within(&rows, 2.0);
            let mut table = String::from("len\tu\tarea\tratio\n");
            for r in &rows {
                table += &format!("{}\t{}\t{}\t{:.2}\n", r.u.len(), r.u, r.area, r.ratio);
            }
            fs::create_dir_all(&out_dir)?;
            fs::write(out_dir.join("area.tsv"), &table)?;
            fs::write(out_dir.join("area.svg"), plot::area_svg(&rows))?;
            print!("{}", report_header("bench-area", &p, started, true));
            print!("{table}");
            println!("# quadratic_ratio_within_2x {} (measured)", if ok { "PASS" } else { "FAIL" });
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::VerifyLemmas { suite, params, seed } => {
            let started = Instant::now();
            let p = params.resolve()?;
            let rows = match run_suite(&suite, &p, seed) {
                Err(e @ Error::UnknownSuite(_)) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(2));
                }
                r => r?,
            };
            let complete = !rows.iter().any(|r| r.provenance == smforge::verify::Provenance::BudgetBounded);
            print!("{}", report_header(&format!("verify-lemmas {suite} --seed {seed}"), &p, started, complete));
            print!("{}", write_rows(&rows));
            if rows.iter().any(|r| !r.passed) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
