//! A persistent working session: configuration, the forced subset, and the
//! journal of mutating operations, stored as one JSON state file.
//!
//! The state file records the realization log and only those pins that the
//! log and the snapshot ball do not already imply; loading rebuilds the full
//! pinned map and re-checks every invariant. Saving is atomic (temp file and
//! rename) and deterministic, so save → load → save is byte-identical.

use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::condense::{certify_condensed, CondensationCertificate, TOOL_VERSION};
use crate::error::{Error, Result};
use crate::forcing::{ForcedSubset, Limits, Pattern, Realization, Side};
use crate::groups::{Ambient, AmbientElement, FiniteGroupTable, TableData};
use crate::marked::{MarkedBall, MarkedSpec};
use crate::wreath::{is_identity_generic, MarkedWord, Verdict};

pub const STATE_FORMAT: &str = "condense-state/1";

/// Where the finite group `B` comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableSource {
    Preset(String),
    File(PathBuf),
}

impl fmt::Display for TableSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableSource::Preset(name) => f.write_str(name),
            TableSource::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl FromStr for TableSource {
    type Err = Error;

    /// A preset name, `file:<path>`, or any other text taken as a path.
    fn from_str(s: &str) -> Result<Self> {
        if FiniteGroupTable::PRESETS.contains(&s) {
            return Ok(TableSource::Preset(s.to_string()));
        }
        let path = s.strip_prefix("file:").unwrap_or(s);
        if path.is_empty() || path.chars().any(char::is_whitespace) {
            return Err(Error::Usage(format!("invalid table source `{s}`")));
        }
        Ok(TableSource::File(PathBuf::from(path)))
    }
}

impl TableSource {
    pub fn load(&self) -> Result<TableData> {
        match self {
            TableSource::Preset(name) => FiniteGroupTable::preset(name)
                .map(|t| t.data())
                .ok_or_else(|| Error::Usage(format!("unknown preset `{name}`"))),
            TableSource::File(path) => std::fs::read_to_string(path)?.parse(),
        }
    }
}

/// Everything needed to start a session from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    pub ambient: Ambient,
    pub table: TableSource,
    /// Overrides of the marked pair `a, b` (element indices).
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub limits: Limits,
}

impl SessionConfig {
    pub fn new(ambient: Ambient, table: TableSource) -> Self {
        Self {
            ambient,
            table,
            a: None,
            b: None,
            limits: Limits::default(),
        }
    }

    /// Loads and validates the table, applying the `a`/`b` overrides.
    pub fn build_table(&self) -> Result<FiniteGroupTable> {
        let mut data = self.table.load()?;
        if let Some(a) = self.a {
            data.a = a;
        }
        if let Some(b) = self.b {
            data.b = b;
        }
        Ok(FiniteGroupTable::new(&data)?)
    }
}

impl fmt::Display for SessionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ambient={} table={}", self.ambient, self.table)?;
        if let Some(a) = self.a {
            write!(f, " a={a}")?;
        }
        if let Some(b) = self.b {
            write!(f, " b={b}")?;
        }
        write!(
            f,
            " ball-cap={} fresh-len={}",
            self.limits.ball_cap, self.limits.max_translate_len
        )
    }
}

impl FromStr for SessionConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut ambient = None;
        let mut table = None;
        let mut config_a = None;
        let mut config_b = None;
        let mut limits = Limits::default();
        let positive = |key: &str, value: &str| -> Result<usize> {
            match value.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(Error::Usage(format!("{key} must be a positive integer, got `{value}`"))),
            }
        };
        let index = |key: &str, value: &str| -> Result<usize> {
            value
                .parse()
                .map_err(|_| Error::Usage(format!("{key} must be an element index, got `{value}`")))
        };
        for item in s.split_whitespace() {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("expected key=value, got `{item}`")))?;
            match key {
                "ambient" => ambient = Some(value.parse()?),
                "table" => table = Some(value.parse()?),
                "a" => config_a = Some(index(key, value)?),
                "b" => config_b = Some(index(key, value)?),
                "ball-cap" => limits.ball_cap = positive(key, value)?,
                "fresh-len" => limits.max_translate_len = positive(key, value)?,
                _ => return Err(Error::Usage(format!("unknown configuration key `{key}`"))),
            }
        }
        Ok(Self {
            ambient: ambient.ok_or_else(|| Error::Usage("missing ambient=".into()))?,
            table: table.ok_or_else(|| Error::Usage("missing table=".into()))?,
            a: config_a,
            b: config_b,
            limits,
        })
    }
}

/// Text form of a pattern: `{"E": [...], "F": [...]}`, where `F` may also
/// be the string `"ball:n"` for the whole of `Ball_H(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternFile {
    #[serde(rename = "E")]
    pub included: Vec<String>,
    #[serde(rename = "F")]
    pub window: WindowFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WindowFile {
    Ball(String),
    List(Vec<String>),
}

impl PatternFile {
    pub fn from_pattern(p: &Pattern, ambient: Ambient) -> Self {
        let radius = p.radius();
        let window = if !p.is_empty() && ambient.ball_size(radius) == Some(p.len()) {
            WindowFile::Ball(format!("ball:{radius}"))
        } else {
            WindowFile::List(p.window().iter().map(|x| x.to_string()).collect())
        };
        Self {
            included: p.included().iter().map(|x| x.to_string()).collect(),
            window,
        }
    }

    pub fn to_pattern(&self, ambient: Ambient, cap: usize) -> Result<Pattern> {
        let parse = |t: &String| ambient.parse_element(t).map_err(Error::from);
        let included = self.included.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let window = match &self.window {
            WindowFile::List(items) => items.iter().map(parse).collect::<Result<Vec<_>>>()?,
            WindowFile::Ball(spec) => {
                let radius = spec
                    .strip_prefix("ball:")
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| Error::Usage(format!("expected `ball:<n>`, got `{spec}`")))?;
                ambient.ball(radius, cap)?.elements
            }
        };
        Pattern::new(included, window)
    }
}

/// A journaled operation. Replaying the journal against a fresh session
/// rebuilds the same state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Operation {
    Snapshot { radius: usize },
    Pin { pattern: PatternFile },
    Realize { side: String, pattern: PatternFile },
    WordProblem { word: String },
    MarkedBall { radius: usize, translate: Option<String> },
    Certify { radius: usize },
}

/// What an operation produced.
#[derive(Clone, Debug)]
pub enum Outcome {
    Snapshot(Pattern),
    Pinned,
    Realized(AmbientElement),
    Verdict(Verdict),
    Ball(MarkedBall),
    Certificate(Box<CondensationCertificate>),
}

#[derive(Serialize, Deserialize)]
struct RealizationFile {
    side: String,
    #[serde(rename = "E")]
    included: Vec<String>,
    #[serde(rename = "F")]
    window: WindowFile,
    witness: String,
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    format: String,
    tool_version: String,
    config: String,
    table: TableData,
    frontier: usize,
    snapshot_radius: Option<usize>,
    cursor: String,
    pinned: Vec<(String, bool)>,
    realizations: Vec<RealizationFile>,
    journal: Vec<Operation>,
}

pub struct Session {
    config: SessionConfig,
    table: FiniteGroupTable,
    subset: ForcedSubset,
    journal: Vec<Operation>,
}

impl Session {
    pub fn new(config: SessionConfig) -> Result<Self> {
        let table = config.build_table()?;
        let subset = ForcedSubset::new(config.ambient, config.limits);
        Ok(Self {
            config,
            table,
            subset,
            journal: Vec::new(),
        })
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn ambient(&self) -> Ambient {
        self.config.ambient
    }

    pub fn table(&self) -> &FiniteGroupTable {
        &self.table
    }

    pub fn subset(&self) -> &ForcedSubset {
        &self.subset
    }

    /// Direct access for library callers; changes made here are not journaled.
    pub fn subset_mut(&mut self) -> &mut ForcedSubset {
        &mut self.subset
    }

    pub fn journal(&self) -> &[Operation] {
        &self.journal
    }

    pub fn parse_element(&self, text: &str) -> Result<AmbientElement> {
        Ok(self.ambient().parse_element(text)?)
    }

    pub fn parse_word(&self, text: &str) -> Result<MarkedWord> {
        Ok(MarkedWord::parse(text, self.ambient().generator_count())?)
    }

    /// Runs an operation and appends it to the journal if it succeeds.
    pub fn apply(&mut self, op: Operation) -> Result<Outcome> {
        let outcome = self.execute(&op)?;
        self.journal.push(op);
        Ok(outcome)
    }

    fn execute(&mut self, op: &Operation) -> Result<Outcome> {
        let ambient = self.ambient();
        let cap = self.config.limits.ball_cap;
        Ok(match op {
            Operation::Snapshot { radius } => Outcome::Snapshot(self.subset.snapshot(*radius)?),
            Operation::Pin { pattern } => {
                self.subset.pin_window(&pattern.to_pattern(ambient, cap)?)?;
                Outcome::Pinned
            }
            Operation::Realize { side, pattern } => {
                let p = pattern.to_pattern(ambient, cap)?;
                let w = match side.parse()? {
                    Side::Left => self.subset.realize_left(&p)?,
                    Side::Right => self.subset.realize_right(&p)?,
                };
                Outcome::Realized(w)
            }
            Operation::WordProblem { word } => {
                let w = self.parse_word(word)?;
                Outcome::Verdict(is_identity_generic(&w, &self.table, &mut self.subset.view())?)
            }
            Operation::MarkedBall { radius, translate } => {
                let h = match translate {
                    Some(t) => self.parse_element(t)?,
                    None => ambient.identity(),
                };
                let mut spec = MarkedSpec::translated(ambient, self.table.clone(), h);
                Outcome::Ball(spec.build_ball(&mut self.subset, *radius)?)
            }
            Operation::Certify { radius } => {
                Outcome::Certificate(Box::new(certify_condensed(&mut self.subset, &self.table, *radius)?))
            }
        })
    }

    /// Re-executes the journal against a fresh session with the same configuration.
    pub fn replay(&self) -> Result<Session> {
        let mut fresh = Session {
            config: self.config.clone(),
            table: self.table.clone(),
            subset: ForcedSubset::new(self.config.ambient, self.config.limits),
            journal: Vec::new(),
        };
        for op in &self.journal {
            fresh.apply(op.clone())?;
        }
        Ok(fresh)
    }

    pub fn to_json(&self) -> Result<String> {
        let ambient = self.ambient();
        let state = StateFile {
            format: STATE_FORMAT.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            config: self.config.to_string(),
            table: self.table.data(),
            frontier: self.subset.frontier(),
            snapshot_radius: self.subset.snapshot_radius(),
            cursor: self.subset.cursor().to_string(),
            pinned: self
                .subset
                .explicit_pins()
                .map(|(x, v)| (x.to_string(), v))
                .collect(),
            realizations: self
                .subset
                .realizations()
                .iter()
                .map(|r| {
                    let file = PatternFile::from_pattern(&r.pattern, ambient);
                    RealizationFile {
                        side: r.side.to_string(),
                        included: file.included,
                        window: file.window,
                        witness: r.witness.to_string(),
                    }
                })
                .collect(),
            journal: self.journal.clone(),
        };
        Ok(crate::json::to_string(&state, 2)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let state: StateFile = serde_json::from_str(text)?;
        if state.format != STATE_FORMAT {
            return Err(Error::State(format!("unsupported state format `{}`", state.format)));
        }
        let config: SessionConfig = state.config.parse()?;
        let ambient = config.ambient;
        let table = FiniteGroupTable::new(&state.table)?;
        if let TableSource::Preset(name) = &config.table {
            if config.build_table()? != table {
                return Err(Error::State(format!("embedded table differs from preset `{name}`")));
            }
        }
        let parse = |t: &str| {
            ambient
                .parse_element(t)
                .map_err(|e| Error::State(format!("element `{t}`: {e}")))
        };
        let explicit = state
            .pinned
            .iter()
            .map(|(x, v)| Ok((parse(x)?, *v)))
            .collect::<Result<Vec<_>>>()?;
        let realizations = state
            .realizations
            .iter()
            .map(|r| {
                let pattern = PatternFile {
                    included: r.included.clone(),
                    window: r.window.clone(),
                }
                .to_pattern(ambient, config.limits.ball_cap)?;
                Ok(Realization {
                    side: r.side.parse()?,
                    pattern,
                    witness: parse(&r.witness)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let subset = ForcedSubset::restore(
            ambient,
            config.limits,
            explicit,
            realizations,
            state.snapshot_radius,
            parse(&state.cursor)?,
        )?;
        if subset.frontier() != state.frontier {
            return Err(Error::State(format!(
                "recorded frontier {} differs from recomputed {}",
                state.frontier,
                subset.frontier()
            )));
        }
        Ok(Self {
            config,
            table,
            subset,
            journal: state.journal,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::State(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Atomic write: temp file in the same directory, then rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = self.to_json()?;
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        std::io::Write::write_all(&mut tmp, text.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }
}

/// Advisory exclusive lock on `<state>.lock`, released on drop.
pub struct StateLock {
    _file: File,
    path: PathBuf,
}

impl StateLock {
    pub fn acquire(state: &Path) -> Result<Self> {
        let mut name = state.as_os_str().to_owned();
        name.push(".lock");
        let path = PathBuf::from(name);
        let file = File::options().create(true).truncate(false).write(true).open(&path)?;
        match file.try_lock() {
            Ok(()) => Ok(Self { _file: file, path }),
            Err(std::fs::TryLockError::WouldBlock) => Err(Error::State(format!(
                "{} is locked by another process",
                state.display()
            ))),
            Err(std::fs::TryLockError::Error(e)) => Err(e.into()),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}
