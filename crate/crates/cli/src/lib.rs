//! The `condense` command line. [`run`] is the whole program; `main` only
//! forwards the process arguments and exit code.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage,
//! parse, I/O or state error, 3 capacity exceeded.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use condense_core::session::WindowFile;
use condense_core::{
    distinguish, r_similar, transitivity_witness, verify_certificate, xi, Ambient, CondensationCertificate, Error,
    Fallback, FiniteGroupTable, Limits, MarkedPair, Operation, Outcome, PairSide, PatternFile, Session, SessionConfig,
    Side, StateLock, Subsets, TableSource,
};
use condense_core::wreath::is_identity_window;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "condense", version, about = "Word problems, marked balls and condensation certificates for G_S in B Wr H")]
struct Cli {
    /// Session state file.
    #[arg(long, global = true, default_value = "state.json")]
    state: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Create a new session state.
    Init {
        /// Ambient group: free:k or zd:d.
        #[arg(long)]
        ambient: String,
        /// Preset name (s3, d4, q8) or path to a table file.
        #[arg(long)]
        table: String,
        /// Override the element index of a.
        #[arg(long)]
        a: Option<usize>,
        /// Override the element index of b.
        #[arg(long)]
        b: Option<usize>,
        /// Largest ball or vertex count any operation may build.
        #[arg(long, env = "CONDENSE_BALL_CAP")]
        ball_cap: Option<usize>,
        /// Longest fresh translate the forcing search may try.
        #[arg(long, env = "CONDENSE_FRESH_LEN")]
        fresh_len: Option<usize>,
        /// Overwrite an existing state file.
        #[arg(long)]
        force: bool,
    },
    /// Check a multiplication table (the session's, or --table).
    ValidateTable {
        #[arg(long)]
        table: Option<String>,
    },
    /// List Ball_H(r) in shortlex order.
    Ball {
        #[arg(long)]
        radius: usize,
        /// Ambient group; defaults to the session's.
        #[arg(long)]
        ambient: Option<String>,
    },
    /// Decide whether a marked word is trivial in G_S.
    Wp {
        #[arg(long)]
        word: String,
        /// Also run the brute-force window oracle on Ball_H(R).
        #[arg(long)]
        window: Option<usize>,
    },
    /// Pin S on Ball_H(n) and print the pattern.
    Snapshot {
        #[arg(long)]
        radius: usize,
    },
    /// Pin a pattern file onto S as it stands.
    Pin {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Realize a pattern on a fresh left or right translate of S.
    Realize {
        #[arg(long)]
        side: Side,
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Witness for the transitivity lemma on two patterns.
    Transitivity {
        #[arg(long)]
        su: PathBuf,
        #[arg(long)]
        tv: PathBuf,
        #[arg(long, default_value = "L")]
        side: Side,
    },
    /// Dump the radius-r ball of the marked group of S (or hS).
    Markedball {
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        translate: Option<String>,
    },
    /// Compare radius-r balls with another session.
    Similar {
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        radius: usize,
    },
    /// Find a word separating this session's marked group from another's.
    Distinguish {
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        radius: usize,
    },
    /// Produce a condensation certificate at radius r.
    Certify {
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check a certificate against the state file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Re-execute the journal and compare with the stored state.
    Replay,
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::Verification(_) => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let state = cli.state.as_path();
    match cli.command {
        Command::Init {
            ambient,
            table,
            a,
            b,
            ball_cap,
            fresh_len,
            force,
        } => {
            let _lock = StateLock::acquire(state)?;
            if state.exists() && !force {
                return Err(Error::Usage(format!("{} already exists (use --force)", state.display())));
            }
            let mut config = SessionConfig::new(ambient.parse()?, table.parse()?);
            config.a = a;
            config.b = b;
            let defaults = Limits::default();
            config.limits = Limits {
                ball_cap: positive("ball cap", ball_cap.unwrap_or(defaults.ball_cap))?,
                max_translate_len: positive("fresh length", fresh_len.unwrap_or(defaults.max_translate_len))?,
            };
            let session = Session::new(config)?;
            session.save(state)?;
            writeln!(out, "initialized {} ({})", state.display(), session.config())?;
            Ok(EXIT_OK)
        }
        Command::ValidateTable { table } => {
            let data = match table {
                Some(t) => t.parse::<TableSource>()?.load()?,
                None => Session::load(state)?.table().data(),
            };
            match FiniteGroupTable::new(&data) {
                Ok(t) => {
                    writeln!(out, "ok: order {}, a = {}, b = {}", t.order(), t.gen_a(), t.gen_b())?;
                    Ok(EXIT_OK)
                }
                Err(d) => {
                    writeln!(out, "invalid: {d}")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Ball { radius, ambient } => {
            let (ambient, cap) = match ambient {
                Some(a) => (a.parse::<Ambient>()?, Limits::default().ball_cap),
                None => {
                    let s = Session::load(state)?;
                    (s.ambient(), s.config().limits.ball_cap)
                }
            };
            for g in ambient.ball(radius, cap)?.iter() {
                writeln!(out, "{g}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Wp { word, window } => mutate(state, |session| {
            let Outcome::Verdict(v) = session.apply(Operation::WordProblem { word: word.clone() })? else {
                unreachable!("word problems yield verdicts")
            };
            let mut lines = vec![v.to_string()];
            if let Some(radius) = window {
                let w = session.parse_word(&word)?;
                let subset = session.subset();
                let frozen = subset.frozen(&session.ambient().identity(), Fallback::False);
                let wv = is_identity_window(&w, session.ambient(), session.table(), &frozen, radius, subset.limits().ball_cap)?;
                lines.push(format!("window {radius}: {wv}"));
            }
            let code = if v.is_identity() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok((lines.join("\n"), code))
        }, out),
        Command::Snapshot { radius } => mutate(state, |session| {
            let Outcome::Snapshot(p) = session.apply(Operation::Snapshot { radius })? else {
                unreachable!("snapshots yield patterns")
            };
            let mut file = PatternFile::from_pattern(&p, session.ambient());
            file.window = WindowFile::Ball(format!("ball:{radius}"));
            Ok((serde_json::to_string_pretty(&file)?, EXIT_OK))
        }, out),
        Command::Pin { pattern } => {
            let file = read_pattern(&pattern)?;
            mutate(state, |session| {
                let n = file.to_pattern(session.ambient(), session.config().limits.ball_cap)?.len();
                session.apply(Operation::Pin { pattern: file.clone() })?;
                Ok((format!("pinned {n} elements"), EXIT_OK))
            }, out)
        }
        Command::Realize { side, pattern } => {
            let file = read_pattern(&pattern)?;
            mutate(state, |session| {
                let Outcome::Realized(h) = session.apply(Operation::Realize {
                    side: side.to_string(),
                    pattern: file.clone(),
                })?
                else {
                    unreachable!("realizations yield witnesses")
                };
                Ok((format!("witness {h}"), EXIT_OK))
            }, out)
        }
        Command::Transitivity { su, tv, side } => {
            let session = Session::load(state)?;
            let (ambient, cap) = (session.ambient(), session.config().limits.ball_cap);
            let su = read_pattern(&su)?.to_pattern(ambient, cap)?;
            let tv = read_pattern(&tv)?.to_pattern(ambient, cap)?;
            let w = transitivity_witness(ambient, &su, &tv, side);
            if !w.verify(&su, &tv) {
                return Err(Error::Verification("transitivity witness does not check".into()));
            }
            writeln!(out, "h {}", w.h)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&PatternFile::from_pattern(&w.r_pattern, ambient))?)?;
            Ok(EXIT_OK)
        }
        Command::Markedball { radius, translate } => mutate(state, |session| {
            let Outcome::Ball(ball) = session.apply(Operation::MarkedBall { radius, translate: translate.clone() })? else {
                unreachable!("marked balls yield balls")
            };
            let dump = ball.dump();
            Ok((dump.trim_end().to_string(), EXIT_OK))
        }, out),
        Command::Similar { other, radius } => {
            let (mut first, mut second) = load_pair(state, &other)?;
            let mut pair = pair_of(&mut first, &mut second)?;
            let b1 = pair.build_ball(PairSide::First, radius)?;
            let b2 = pair.build_ball(PairSide::Second, radius)?;
            if r_similar(&b1, &b2)? {
                writeln!(out, "similar at radius {radius} ({} vertices)", b1.len())?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "not similar at radius {radius} ({} vs {} vertices)", b1.len(), b2.len())?;
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Distinguish { other, radius } => {
            let (mut first, mut second) = load_pair(state, &other)?;
            let mut pair = pair_of(&mut first, &mut second)?;
            match distinguish(&mut pair, radius)? {
                Some(w) => {
                    writeln!(out, "s {}\nside {}\nword {}", w.s, w.side, w.word)?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(out, "inconclusive: the subsets agree on Ball_H({radius})")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Certify { radius, out: path } => mutate(state, |session| {
            let Outcome::Certificate(c) = session.apply(Operation::Certify { radius })? else {
                unreachable!("certify yields certificates")
            };
            std::fs::write(&path, c.to_json()?)?;
            Ok((
                format!("certificate r = {} h = {} s = {} written to {}", c.r, c.h, c.witness.s, path.display()),
                EXIT_OK,
            ))
        }, out),
        Command::Verify { cert } => {
            let session = Session::load(state)?;
            let text = std::fs::read_to_string(&cert)?;
            let c = CondensationCertificate::from_json(&text, session.ambient())?;
            match verify_certificate(&c, session.subset(), session.table()) {
                Ok(()) => {
                    writeln!(out, "ok: certificate at radius {} verified", c.r)?;
                    Ok(EXIT_OK)
                }
                Err(Error::Verification(reason)) => {
                    writeln!(out, "failed: {reason}")?;
                    Ok(EXIT_NEGATIVE)
                }
                Err(e) => Err(e),
            }
        }
        Command::Replay => {
            let session = Session::load(state)?;
            let replayed = session.replay()?;
            // loading re-pins realization windows first, so insertion order differs; compare as maps
            let pins = |s: &Session| s.subset().pinned().map(|(x, v)| (x.clone(), v)).collect::<HashMap<_, _>>();
            if replayed.to_json()? == session.to_json()? && pins(&replayed) == pins(&session) {
                writeln!(
                    out,
                    "replay ok: {} operations, {} pinned elements",
                    session.journal().len(),
                    session.subset().pinned_len()
                )?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "replay differs from the stored state")?;
                Ok(EXIT_NEGATIVE)
            }
        }
    }
}

/// Locks the state, runs `f`, and saves atomically if it succeeded.
fn mutate(
    state: &Path,
    f: impl FnOnce(&mut Session) -> Result<(String, i32), Error>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let _lock = StateLock::acquire(state)?;
    let mut session = Session::load(state)?;
    let (text, code) = f(&mut session)?;
    session.save(state)?;
    writeln!(out, "{text}")?;
    Ok(code)
}

fn positive(what: &str, n: usize) -> Result<usize, Error> {
    if n == 0 {
        return Err(Error::Usage(format!("{what} must be positive")));
    }
    Ok(n)
}

fn read_pattern(path: &Path) -> Result<PatternFile, Error> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn load_pair(first: &Path, second: &Path) -> Result<(Session, Session), Error> {
    let a = Session::load(first)?;
    let b = Session::load(second)?;
    if a.ambient() != b.ambient() {
        return Err(Error::BackendMismatch(format!("{} against {}", a.ambient(), b.ambient())));
    }
    Ok((a, b))
}

/// Both sides read private copies: comparisons never write either state.
fn pair_of<'a>(first: &'a mut Session, second: &'a mut Session) -> Result<MarkedPair<'a>, Error> {
    let ambient = first.ambient();
    let (t1, t2) = (first.table().clone(), second.table().clone());
    MarkedPair::new(
        xi(ambient, &t1, None),
        xi(ambient, &t2, None),
        Subsets::Separate(first.subset_mut(), second.subset_mut()),
    )
}
