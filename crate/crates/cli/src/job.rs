//! Job spec files: `[section]` headers followed by `key = value` lines.
//!
//! ```text
//! [job]
//! mode = sequential
//! n = 100000
//!
//! [language]
//! regex = (a|b)*a(a|b)*
//!
//! [sequence]
//! spec = bernoulli p_n = 1/n over a,b
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Density,
    Sequential,
    Combinatorial,
    Monoid,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Density => "density",
            Mode::Sequential => "sequential",
            Mode::Combinatorial => "combinatorial",
            Mode::Monoid => "monoid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Language {
    Regex(String),
    /// The language of a shift, read from a shift file.
    Shift(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShiftSource {
    File(PathBuf),
    Forbidden(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub name: String,
    pub mode: Mode,
    pub language: Language,
    pub alphabet: Option<Vec<char>>,
    pub measure: Option<String>,
    pub sequence: Option<String>,
    pub shift: Option<ShiftSource>,
    pub shift_alphabet: Option<Vec<char>>,
    pub n: usize,
    pub checkpoints: Option<Vec<usize>>,
    pub tolerance: f64,
    pub output: PathBuf,
    /// Directory of the spec file; relative paths resolve against it.
    pub base: PathBuf,
}

const KEYS: &[(&str, &[&str])] = &[
    ("job", &["mode", "n", "checkpoints", "tolerance", "output"]),
    ("language", &["regex", "shift", "alphabet"]),
    ("measure", &["spec"]),
    ("sequence", &["spec"]),
    ("shift", &["file", "forbid", "alphabet"]),
];

fn spec_error(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn parse_letters(value: &str) -> Vec<char> {
    value.chars().filter(|c| !c.is_whitespace() && *c != ',').collect()
}

impl JobSpec {
    pub fn load(path: &Path) -> Result<JobSpec, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| spec_error(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "job".into());
        JobSpec::parse(&text, &name, &base)
    }

    pub fn parse(text: &str, name: &str, base: &Path) -> Result<JobSpec, CliError> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |msg: String| spec_error(format!("line {}: {msg}", lineno + 1));
            if let Some(header) = line.strip_prefix('[') {
                let header = header.strip_suffix(']').ok_or_else(|| at(format!("unterminated header {line:?}")))?.trim();
                if !KEYS.iter().any(|(s, _)| *s == header) {
                    return Err(at(format!("unknown section [{header}]")));
                }
                if sections.contains_key(header) {
                    return Err(at(format!("duplicate section [{header}]")));
                }
                sections.insert(header.to_string(), BTreeMap::new());
                current = Some(header.to_string());
                continue;
            }
            let section = current.as_ref().ok_or_else(|| at("key outside of a section".into()))?;
            let (key, value) = line.split_once('=').ok_or_else(|| at(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let allowed = KEYS.iter().find(|(s, _)| s == section).unwrap().1;
            if !allowed.contains(&key) {
                return Err(at(format!("unknown key {key:?} in [{section}]")));
            }
            if sections.get_mut(section).unwrap().insert(key.to_string(), value.to_string()).is_some() {
                return Err(at(format!("duplicate key {key:?}")));
            }
        }
        let get = |section: &str, key: &str| sections.get(section).and_then(|s| s.get(key)).cloned();

        let mode = match get("job", "mode").as_deref() {
            Some("density") => Mode::Density,
            Some("sequential") => Mode::Sequential,
            Some("combinatorial") => Mode::Combinatorial,
            Some("monoid") => Mode::Monoid,
            Some(other) => return Err(spec_error(format!("unknown mode {other:?}"))),
            None => return Err(spec_error("[job] mode is required")),
        };
        let language = match (get("language", "regex"), get("language", "shift")) {
            (Some(re), None) => Language::Regex(re),
            (None, Some(path)) => Language::Shift(base.join(path)),
            (Some(_), Some(_)) => return Err(spec_error("[language] takes either regex or shift, not both")),
            (None, None) => return Err(spec_error("[language] regex or shift is required")),
        };
        let shift = match (get("shift", "file"), get("shift", "forbid")) {
            (Some(path), None) => Some(ShiftSource::File(base.join(path))),
            (None, Some(blocks)) => Some(ShiftSource::Forbidden(
                blocks.split(',').map(|b| b.trim().to_string()).filter(|b| !b.is_empty()).collect(),
            )),
            (Some(_), Some(_)) => return Err(spec_error("[shift] takes either file or forbid, not both")),
            (None, None) => None,
        };
        let n_default = match mode {
            Mode::Density => 1000,
            Mode::Sequential | Mode::Combinatorial => 10_000,
            Mode::Monoid => 0,
        };
        let n = match get("job", "n") {
            Some(v) => parse_count(&v)?,
            None => n_default,
        };
        let checkpoints = get("job", "checkpoints")
            .map(|v| v.split(',').map(|c| parse_count(c.trim())).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        let tolerance = match get("job", "tolerance") {
            Some(v) => v.parse::<f64>().map_err(|_| spec_error(format!("bad tolerance {v:?}")))?,
            None => ratdense::sequential::DEFAULT_TOLERANCE,
        };
        let job = JobSpec {
            name: name.to_string(),
            mode,
            language,
            alphabet: get("language", "alphabet").map(|v| parse_letters(&v)),
            measure: get("measure", "spec"),
            sequence: get("sequence", "spec"),
            shift,
            shift_alphabet: get("shift", "alphabet").map(|v| parse_letters(&v)),
            n,
            checkpoints,
            tolerance,
            output: base.join(get("job", "output").unwrap_or_else(|| ".".into())),
            base: base.to_path_buf(),
        };
        job.validate()?;
        Ok(job)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(spec_error("tolerance must be positive"));
        }
        let needs = |present: bool, what: &str| {
            if present {
                Ok(())
            } else {
                Err(spec_error(format!("{} mode needs {what}", self.mode.name())))
            }
        };
        match self.mode {
            Mode::Density | Mode::Monoid => needs(self.measure.is_some(), "a [measure] section")?,
            Mode::Sequential => needs(self.sequence.is_some(), "a [sequence] section")?,
            Mode::Combinatorial => needs(self.shift.is_some(), "a [shift] section")?,
        }
        if self.mode != Mode::Monoid && self.n == 0 {
            return Err(spec_error("n must be at least 1"));
        }
        if let Some(ShiftSource::Forbidden(_)) = &self.shift {
            needs(self.shift_alphabet.is_some(), "an alphabet for forbidden blocks")?;
        }
        for path in [
            if let Language::Shift(p) = &self.language { Some(p) } else { None },
            if let Some(ShiftSource::File(p)) = &self.shift { Some(p) } else { None },
        ]
        .into_iter()
        .flatten()
        {
            if !path.is_file() {
                return Err(spec_error(format!("missing file {}", path.display())));
            }
        }
        Ok(())
    }
}

fn parse_count(v: &str) -> Result<usize, CliError> {
    let v = v.trim();
    if let Some((m, e)) = v.split_once("e") {
        // 1e5, 10e3
        let m: usize = m.parse().map_err(|_| spec_error(format!("bad count {v:?}")))?;
        let e: u32 = e.parse().map_err(|_| spec_error(format!("bad count {v:?}")))?;
        return 10usize.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(|| spec_error(format!("count {v:?} too large")));
    }
    v.replace('_', "").parse().map_err(|_| spec_error(format!("bad count {v:?}")))
}
