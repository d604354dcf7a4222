//! Runs a job and renders its reports. Nothing is written until every
//! computation has succeeded.

use std::fmt::Write as _;
use std::path::PathBuf;

use ratdense::combinatorial::combinatorial_density_with_tolerance;
use ratdense::density::{self, check_corollary, element_densities, lift_chain, slice_masses};
use ratdense::sequential::{cesaro_partials, default_checkpoints, sequential_density_with_tolerance, CesaroSummary};
use ratdense::{Dfa, Measure, MeasureSequence, Monoid, Sft};

use crate::job::{JobSpec, Language, Mode, ShiftSource};
use crate::CliError;

/// Files to write, relative to the output directory, and the summary text.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub files: Vec<(String, String)>,
    pub summary: String,
}

impl Report {
    pub fn write(&self, dir: &std::path::Path) -> Result<Vec<PathBuf>, CliError> {
        let io = |path: &std::path::Path, e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut written = Vec::new();
        for (name, content) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, content).map_err(|e| io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn letters(alphabet: &[char]) -> String {
    alphabet.iter().map(char::to_string).collect::<Vec<_>>().join(",")
}

fn series_csv(terms: &[f64]) -> String {
    let mut out = String::from("index,term,cesaro_partial\n");
    for (i, (t, u)) in terms.iter().zip(cesaro_partials(terms)).enumerate() {
        writeln!(out, "{i},{t},{u}").unwrap();
    }
    out
}

fn summary_lines(out: &mut String, s: &CesaroSummary) {
    writeln!(out, "delta: {}", s.estimate).unwrap();
    writeln!(out, "verdict: {}", s.verdict).unwrap();
    writeln!(out, "cauchy_spread: {}", s.cauchy_spread).unwrap();
    writeln!(out, "window: {}", s.window).unwrap();
    writeln!(out, "tolerance: {}", s.tolerance).unwrap();
    writeln!(out, "term_oscillation: {}", s.term_oscillation).unwrap();
    writeln!(out, "strong: {}", s.strong).unwrap();
    for (n, u) in &s.checkpoints {
        writeln!(out, "checkpoint {n}: {u}").unwrap();
    }
}

struct Context {
    measure: Option<Measure>,
    sequence: Option<MeasureSequence>,
    shift: Option<Sft>,
}

fn load_context(job: &JobSpec) -> Result<Context, CliError> {
    let measure = job.measure.as_deref().map(|m| Measure::parse_spec(m, &job.base)).transpose()?;
    let sequence = job.sequence.as_deref().map(|s| MeasureSequence::parse_spec(s, &job.base)).transpose()?;
    let shift = match &job.shift {
        Some(ShiftSource::File(path)) => Some(Sft::load(path)?),
        Some(ShiftSource::Forbidden(blocks)) => {
            let alphabet = job.shift_alphabet.as_deref().unwrap_or_default();
            let refs: Vec<&str> = blocks.iter().map(String::as_str).collect();
            Some(Sft::from_forbidden_blocks(alphabet, &refs)?)
        }
        None => None,
    };
    Ok(Context { measure, sequence, shift })
}

fn language(job: &JobSpec, ctx: &Context) -> Result<(Dfa, String), CliError> {
    match &job.language {
        Language::Shift(path) => Ok((Sft::load(path)?.language_dfa(), format!("L({})", path.display()))),
        Language::Regex(re) => {
            let alphabet: Vec<char> = job
                .alphabet
                .clone()
                .or_else(|| ctx.measure.as_ref().map(|m| m.alphabet().to_vec()))
                .or_else(|| ctx.sequence.as_ref().map(MeasureSequence::alphabet))
                .or_else(|| ctx.shift.as_ref().map(|x| x.alphabet().to_vec()))
                .unwrap_or_else(|| {
                    let mut v: Vec<char> = re.chars().filter(|c| c.is_alphanumeric()).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                });
            Ok((Dfa::parse_regex(re, &alphabet)?, re.clone()))
        }
    }
}

pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let ctx = load_context(job)?;
    let (dfa, description) = language(job, &ctx)?;
    let mut summary = String::new();
    writeln!(summary, "job: {}", job.name).unwrap();
    writeln!(summary, "mode: {}", job.mode.name()).unwrap();
    writeln!(summary, "language: {description}").unwrap();
    writeln!(summary, "alphabet: {}", letters(dfa.alphabet())).unwrap();
    let csv_name = format!("{}.csv", job.name);
    let csv = match job.mode {
        Mode::Density => {
            let measure = ctx.measure.as_ref().expect("validated");
            let result = density::density(&dfa, measure)?;
            let terms = slice_masses(&lift_chain(&dfa.minimize(), measure)?, job.n);
            writeln!(summary, "measure: {}", job.measure.as_deref().unwrap_or_default()).unwrap();
            writeln!(summary, "terms: {}", job.n).unwrap();
            writeln!(summary, "delta: {}", result.value).unwrap();
            writeln!(summary, "density_mode: {}", result.mode).unwrap();
            let aperiodic = result.aperiodic_language.map_or("unknown".to_string(), |a| a.to_string());
            writeln!(summary, "aperiodic_language: {aperiodic}").unwrap();
            writeln!(summary, "tail_oscillation: {}", result.diagnostics.tail_oscillation).unwrap();
            writeln!(summary, "terms_computed: {}", result.diagnostics.terms_computed).unwrap();
            writeln!(summary, "periods: {:?}", result.diagnostics.periods).unwrap();
            writeln!(summary, "structural: {}", result.diagnostics.structural).unwrap();
            series_csv(&terms)
        }
        Mode::Sequential => {
            let seq = ctx.sequence.as_ref().expect("validated");
            let checkpoints = job.checkpoints.clone().unwrap_or_else(|| default_checkpoints(job.n));
            let r = sequential_density_with_tolerance(seq, &dfa, job.n, &checkpoints, job.tolerance)?;
            writeln!(summary, "sequence: {}", seq.description()).unwrap();
            writeln!(summary, "terms: {}", job.n).unwrap();
            summary_lines(&mut summary, &r.summary);
            let limit = r.limit_density.map_or("unknown".to_string(), |d| d.to_string());
            writeln!(summary, "limit_measure_density: {limit}").unwrap();
            series_csv(&r.terms)
        }
        Mode::Combinatorial => {
            let shift = ctx.shift.as_ref().expect("validated");
            let checkpoints = job.checkpoints.clone().unwrap_or_else(|| default_checkpoints(job.n));
            let r = combinatorial_density_with_tolerance(&dfa, shift, job.n, &checkpoints, job.tolerance)?;
            writeln!(summary, "shift_vertices: {}", shift.num_vertices()).unwrap();
            writeln!(summary, "terms: {}", job.n).unwrap();
            summary_lines(&mut summary, &r.summary);
            series_csv(&r.ratios)
        }
        Mode::Monoid => {
            let measure = ctx.measure.as_ref().expect("validated");
            let minimal = dfa.minimize();
            let monoid = Monoid::transition_monoid(&minimal)?;
            let ideal = monoid.minimal_ideal();
            let nu = element_densities(&monoid, measure)?;
            let report = check_corollary(&monoid, &ideal, &nu);
            let mut csv = String::from("element,witness,transformation,density,in_minimal_ideal,d,predicted\n");
            for entry in &report.entries {
                let e = entry.element;
                let witness = match monoid.witness(e) {
                    w if w.is_empty() => "ε".to_string(),
                    w => w,
                };
                let t: Vec<String> = monoid.transformation(e).iter().map(u32::to_string).collect();
                let d = entry.d.map_or(String::new(), |d| d.to_string());
                let predicted = entry.predicted.map_or(String::new(), |p| p.to_string());
                writeln!(csv, "{e},{witness},{},{},{},{d},{predicted}", t.join(" "), entry.density, entry.in_minimal_ideal)
                    .unwrap();
            }
            writeln!(summary, "measure: {}", job.measure.as_deref().unwrap_or_default()).unwrap();
            writeln!(summary, "monoid_size: {}", monoid.len()).unwrap();
            writeln!(summary, "minimal_ideal: {:?}", ideal.minimal_ideal).unwrap();
            writeln!(summary, "aperiodic: {}", ideal.aperiodic).unwrap();
            writeln!(summary, "density_sum: {}", report.total).unwrap();
            writeln!(summary, "corollary: {}", if report.passed() { "pass" } else { "fail" }).unwrap();
            for v in &report.violations {
                writeln!(summary, "violation: {v}").unwrap();
            }
            csv
        }
    };
    Ok(Report { files: vec![(csv_name, csv), (format!("{}.summary.txt", job.name), summary.clone())], summary })
}
