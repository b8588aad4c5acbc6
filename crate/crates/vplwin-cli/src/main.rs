use clap::{Args, Parser, Subcommand};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use vplwin::classify::{classify_regular, classify_vpl, exit_code, ClassifyParams};
use vplwin::dichotomy::{verify_critical_tuple, verify_fooling_scheme, CriticalTuple, FoolingBounds, FoolingScheme};
use vplwin::flattening::Flattener;
use vplwin::growth::{census, cfg_growth, growth_verdict, CensusMode, GrowthReport};
use vplwin::regular::nerode_congruence;
use vplwin::text::{parse_machine, parse_witness, Machine, Witness};
use vplwin::vpa::monotonic_factorization;
use vplwin::window::{make_swa, optimal_space_profile, parse_stream, SwaKind};
use vplwin::{Alphabet, Error, Result, Sym, Word};

#[derive(Parser)]
#[command(name = "vplwin", version, about = "Sliding-window membership and space classification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stream push/pop operations through a sliding-window algorithm.
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        algo: SwaKind,
        /// Operations file (`-` for stdin): letters push, `pop` pops.
        #[arg(long, default_value = "-")]
        stream: String,
    },
    /// Constant, logarithmic or linear window space, with evidence.
    Classify {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        census_depth: Option<usize>,
        #[arg(long)]
        search_bound: Option<usize>,
        /// Also mine look-ahead witnesses on the regular flat language.
        #[arg(long)]
        flat_candidates: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Optimal space per window size from the suffix-class oracle.
    SpaceProfile {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Word or image census with a growth verdict.
    Growth {
        #[arg(long, conflicts_with = "machine")]
        grammar: Option<PathBuf>,
        #[arg(long)]
        machine: Option<PathBuf>,
        #[arg(long, requires = "machine")]
        transducer: Option<PathBuf>,
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Monotonic factorization and flattening of a word.
    Flatten {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Re-verify a critical tuple or fooling scheme.
    Verify {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    json: bool,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Other(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Machine> {
    parse_machine(&read(path)?)
}

fn alphabet(m: &Machine) -> &Alphabet {
    match m {
        Machine::Dfa(d) => &d.alphabet,
        Machine::Vpa(v) => &v.alpha.symbols,
        Machine::Transducer(t) => &t.input,
        Machine::Cfg(g) => &g.terminals,
    }
}

fn json<T: serde::Serialize>(x: &T) -> Result<String> {
    serde_json::to_string_pretty(x).map_err(|e| Error::Other(e.to_string()))
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| Error::Other(e.to_string()));
    match cli.cmd {
        Cmd::Run { machine, algo, stream } => {
            let m = load(&machine)?;
            let text = if stream == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Other(e.to_string()))?;
                s
            } else {
                read(Path::new(&stream))?
            };
            let ops = parse_stream(alphabet(&m), &text)?;
            let mut swa = make_swa(algo, &m)?;
            for (t, op) in ops.into_iter().enumerate() {
                let bit = swa.step(op);
                w(out, format!("{} {} {} {}", t + 1, u8::from(bit), swa.space_bits(), swa.window_len()))?;
            }
        }
        Cmd::Classify { machine, census_depth, search_bound, flat_candidates, out: o } => {
            let params = ClassifyParams { census_depth, search_bound, flat_candidates, ..ClassifyParams::default() };
            let verdict = match load(&machine)? {
                Machine::Dfa(d) => classify_regular(&d, &params)?,
                Machine::Vpa(v) => classify_vpl(&v, &params)?,
                _ => return Err(Error::KindMachineMismatch("classify needs a DFA or a VPA".into())),
            };
            w(out, if o.json { json(&verdict)? } else { verdict.to_string().trim_end().to_string() })?;
        }
        Cmd::SpaceProfile { machine, max_n, out: o } => {
            let p = optimal_space_profile(&load(&machine)?, max_n, ClassifyParams::default().budget)?;
            if o.json {
                w(out, json(&p)?)?;
            } else {
                w(out, "n classes bits".into())?;
                for (n, (c, b)) in p.counts.iter().zip(&p.bits).enumerate() {
                    w(out, format!("{n} {c} {b}"))?;
                }
            }
        }
        Cmd::Growth { grammar, machine, transducer, max_n, out: o } => {
            let report = match (grammar, machine) {
                (Some(g), None) => match parse_machine(&read(&g)?)? {
                    Machine::Cfg(g) => cfg_growth(&g, max_n),
                    _ => return Err(Error::KindMachineMismatch("--grammar needs a @cfg file".into())),
                },
                (None, Some(m)) => machine_growth(&load(&m)?, transducer.as_deref(), max_n)?,
                _ => return Err(Error::Other("give exactly one of --grammar and --machine".into())),
            };
            if o.json {
                w(out, json(&report)?)?;
            } else {
                w(out, format!("growth: {:?} ({})", report.kind, report.evidence))?;
                w(out, "n words".into())?;
                for (n, c) in report.census.iter().enumerate() {
                    w(out, format!("{n} {c}"))?;
                }
            }
        }
        Cmd::Flatten { machine, word } => {
            let Machine::Vpa(v) = load(&machine)? else {
                return Err(Error::KindMachineMismatch("flatten needs a VPA".into()));
            };
            let x = v.alpha.symbols.parse_word(&word)?;
            let f = monotonic_factorization(&v.alpha, &x);
            let shown: Vec<String> = f.iter().filter(|p| !p.is_empty()).map(|p| v.show_word(p)).collect();
            w(out, format!("factors: {}", shown.join(" | ")))?;
            let fl = Flattener::new(&v);
            w(out, format!("flattening: {}", fl.show(&fl.flatten(&x, Some(&f))?)))?;
        }
        Cmd::Verify { machine, witness, n_max } => {
            let m = load(&machine)?;
            let wit = parse_witness(&read(&witness)?)?;
            w(out, verify(&m, &wit, n_max)?)?;
        }
    }
    Ok(())
}

/// Census of `L` (or of `t(L)` with a transducer) with the dual growth test.
fn machine_growth(m: &Machine, transducer: Option<&Path>, n: usize) -> Result<GrowthReport> {
    let member: Box<dyn Fn(&[Sym]) -> bool + Sync> = match m {
        Machine::Dfa(d) => Box::new(move |x: &[Sym]| d.accepts(x)),
        Machine::Vpa(v) => Box::new(move |x: &[Sym]| v.accepts(x)),
        _ => return Err(Error::KindMachineMismatch("--machine needs a DFA or a VPA".into())),
    };
    let t = match transducer {
        Some(p) => match load(p)? {
            Machine::Transducer(t) => Some(t),
            _ => return Err(Error::KindMachineMismatch("--transducer needs a @transducer file".into())),
        },
        None => None,
    };
    let image = |x: &[Sym]| match &t {
        Some(t) => t.evaluate(x).ok().flatten(),
        None => Some(x.to_vec()),
    };
    let c = census(alphabet(m).len(), n, &*member, &image, CensusMode::Image, ClassifyParams::default().budget)?;
    let verdict = growth_verdict(&c.cumulative);
    let evidence = if t.is_some() { "image census" } else { "word census" }.to_string();
    Ok(GrowthReport { kind: verdict.kind, census: c.cumulative, evidence, verdict })
}

fn verify(m: &Machine, wit: &Witness, n_max: usize) -> Result<String> {
    let sigma = alphabet(m);
    let p = |s: &str| sigma.parse_word(s);
    match wit {
        Witness::CriticalTuple { u2, v2, u, v } => {
            let Machine::Dfa(d) = m else {
                return Err(Error::KindMachineMismatch("critical tuples are checked against a DFA".into()));
            };
            let ct = CriticalTuple { u2: p(u2)?, v2: p(v2)?, u: p(u)?, v: p(v)? };
            if !ct.well_formed() {
                return Err(Error::Validation("u2, v2 must be nonempty equal-length suffixes of u, v".into()));
            }
            if !verify_critical_tuple(&nerode_congruence(&d.minimize()), &ct) {
                return Err(Error::Validation("not a critical tuple".into()));
            }
            Ok("critical tuple: ok".into())
        }
        Witness::FoolingScheme { u2, v2, u, v, z } => {
            let z: Vec<(usize, Word)> = z.iter().map(|(n, w)| Ok((*n, p(w)?))).collect::<Result<_>>()?;
            let fs = FoolingScheme { u2: p(u2)?, v2: p(v2)?, u: p(u)?, v: p(v)?, z };
            let b = FoolingBounds { n_max, ..FoolingBounds::default() };
            let r = match m {
                Machine::Dfa(d) => {
                    let cong = nerode_congruence(&d.minimize());
                    verify_fooling_scheme(&|x: &[Sym]| Some(vec![cong.class_of(x)]), &fs, b)?
                }
                Machine::Vpa(v) => verify_fooling_scheme(&|x: &[Sym]| Some(v.config_word(&v.nu(x))), &fs, b)?,
                Machine::Transducer(t) => verify_fooling_scheme(&|x: &[Sym]| t.evaluate(x).ok().flatten(), &fs, b)?,
                Machine::Cfg(_) => return Err(Error::KindMachineMismatch("fooling schemes need a DFA, VPA or transducer".into())),
            };
            Ok(format!("fooling scheme: ok, distinct suffix tuples {:?}", r.distinct))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
