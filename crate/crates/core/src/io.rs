//! Config parsing and trajectory output (CSV, JSON, SVG).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::affect::EmotionLabel;
use crate::error::{Error, Result};
use crate::scenario::{ScenarioConfig, ScenarioOverrides, TrajectoryLog};

pub const CSV_HEADER: &str = "t,agent_loc,action,obs_visibility,valence_raw,arousal_raw,valence_norm,arousal_norm,radius,angle_deg,label,free_energy,selected_G";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Csv, Format::Json, Format::Svg];

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::InvalidInput(format!(
                "unknown output format {other:?} (expected csv, json or svg)"
            ))),
        }
    }
}

/// Files written for one episode.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OutputBundle {
    pub csv_path: Option<PathBuf>,
    pub json_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
    pub emitted: Vec<PathBuf>,
}

/// Reads a JSON file holding one config object or an array of them. Omitted
/// fields take the preset values for the given `scenario_id`.
pub fn parse_config(path: impl AsRef<Path>) -> Result<Vec<ScenarioConfig>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text).map_err(|e| match e {
        Error::Parse { source, .. } => Error::Parse {
            path: path.to_path_buf(),
            source,
        },
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_config_str(text: &str) -> Result<Vec<ScenarioConfig>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|source| Error::Parse {
        path: PathBuf::from("<input>"),
        source,
    })?;
    let entries = match value {
        serde_json::Value::Array(items) => items,
        other => vec![other],
    };
    if entries.is_empty() {
        return Err(Error::Config("config file holds no scenarios".into()));
    }
    entries
        .into_iter()
        .enumerate()
        .map(|(i, entry)| {
            let overrides: ScenarioOverrides = serde_json::from_value(entry)
                .map_err(|e| Error::Config(format!("entry {i}: {e}")))?;
            overrides
                .resolve()
                .map_err(|e| Error::Config(format!("entry {i}: {e}")))
        })
        .collect()
}

pub fn render_csv(log: &TrajectoryLog) -> String {
    let mut out = String::with_capacity(64 * (log.steps.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in &log.steps {
        let a = &s.affect;
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{},{:.6},{:.6}",
            s.t,
            s.agent_location,
            s.action,
            s.observation.visibility,
            a.valence_raw,
            a.arousal_raw,
            a.valence_norm,
            a.arousal_norm,
            a.radius,
            a.angle_deg,
            a.label,
            s.free_energy.total,
            s.selected_policy_g,
        );
    }
    out
}

pub fn render_json(log: &TrajectoryLog) -> Result<String> {
    let mut text = serde_json::to_string_pretty(log)
        .map_err(|e| Error::InvalidInput(format!("cannot serialize log: {e}")))?;
    text.push('\n');
    Ok(text)
}

const SVG_SIZE: f64 = 640.0;
const SVG_RADIUS: f64 = 240.0;

/// Drawing coordinates of a normalized (valence, arousal) point.
pub fn svg_point(valence: f64, arousal: f64) -> (f64, f64) {
    let c = SVG_SIZE / 2.0;
    (c + valence * SVG_RADIUS, c - arousal * SVG_RADIUS)
}

pub fn render_circumplex_svg(log: &TrajectoryLog) -> String {
    let c = SVG_SIZE / 2.0;
    let r = SVG_RADIUS;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}" font-family="sans-serif" font-size="13">"#,
        s = SVG_SIZE
    );
    let title = match log.config.scenario_id {
        Some(id) => format!("Scenario {id} (seed {})", log.config.seed),
        None => format!("Custom scenario (seed {})", log.config.seed),
    };
    let _ = writeln!(out, r#"<title>{title}</title>"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // Sector boundaries at 22.5 + 45k degrees.
    for k in 0..8 {
        let theta = (22.5 + 45.0 * k as f64).to_radians();
        let _ = writeln!(
            out,
            r##"<line x1="{c:.2}" y1="{c:.2}" x2="{:.2}" y2="{:.2}" stroke="#dddddd" stroke-dasharray="4 4"/>"##,
            c + r * theta.cos(),
            c - r * theta.sin()
        );
    }
    let _ = writeln!(
        out,
        r##"<circle cx="{c:.2}" cy="{c:.2}" r="{r:.2}" fill="none" stroke="#333333" stroke-width="1.5"/>"##
    );
    let neutral = log.config.neutral_radius * r;
    let _ = writeln!(
        out,
        r##"<circle cx="{c:.2}" cy="{c:.2}" r="{neutral:.2}" fill="#f2f2f2" stroke="#bbbbbb"/>"##
    );

    // Axes: valence horizontal, arousal vertical.
    let ext = r + 20.0;
    let _ = writeln!(
        out,
        r##"<line x1="{:.2}" y1="{c:.2}" x2="{:.2}" y2="{c:.2}" stroke="#333333"/>"##,
        c - ext,
        c + ext
    );
    let _ = writeln!(
        out,
        r##"<line x1="{c:.2}" y1="{:.2}" x2="{c:.2}" y2="{:.2}" stroke="#333333"/>"##,
        c - ext,
        c + ext
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end">valence</text>"#,
        c + ext,
        c + 18.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="start">arousal</text>"#,
        c + 6.0,
        c - ext + 4.0
    );

    for label in EmotionLabel::SECTORS {
        let theta = label.center_deg().unwrap_or(0.0).to_radians();
        let lr = r + 42.0;
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" dominant-baseline="middle" fill="#555555">{label}</text>"##,
            c + lr * theta.cos(),
            c - lr * theta.sin()
        );
    }

    let points: Vec<(f64, f64)> = log
        .steps
        .iter()
        .map(|s| svg_point(s.affect.valence_norm, s.affect.arousal_norm))
        .collect();
    let joined: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#1f5fbf" stroke-width="2"/>"##,
        joined.join(" ")
    );
    for (step, (x, y)) in log.steps.iter().zip(&points) {
        let _ = writeln!(
            out,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="#1f5fbf"><title>t={} {}</title></circle>"##,
            step.t, step.affect.label
        );
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" font-size="10" fill="#1f5fbf">{}</text>"##,
            x + 5.0,
            y - 5.0,
            step.t
        );
    }
    out.push_str("</svg>\n");
    out
}

fn write_file(path: &Path, contents: &str) -> Result<PathBuf> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}

pub fn emit_csv(log: &TrajectoryLog, path: impl AsRef<Path>) -> Result<PathBuf> {
    write_file(path.as_ref(), &render_csv(log))
}

pub fn emit_json(log: &TrajectoryLog, path: impl AsRef<Path>) -> Result<PathBuf> {
    write_file(path.as_ref(), &render_json(log)?)
}

pub fn emit_circumplex_svg(log: &TrajectoryLog, path: impl AsRef<Path>) -> Result<PathBuf> {
    write_file(path.as_ref(), &render_circumplex_svg(log))
}

/// Output file stems for a batch of configs: `ScenarioConfig::name`, prefixed
/// with the entry index when two entries would collide.
pub fn output_names(configs: &[ScenarioConfig]) -> Vec<String> {
    let names: Vec<String> = configs.iter().map(ScenarioConfig::name).collect();
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() == names.len() {
        names
    } else {
        names
            .into_iter()
            .enumerate()
            .map(|(i, n)| format!("{i:02}_{n}"))
            .collect()
    }
}

/// Writes the resolved configs (defaults filled in) as a JSON array.
pub fn emit_resolved_configs(
    configs: &[ScenarioConfig],
    path: impl AsRef<Path>,
) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(configs)
        .map_err(|e| Error::InvalidInput(format!("cannot serialize configs: {e}")))?;
    text.push('\n');
    write_file(path.as_ref(), &text)
}

/// Writes the requested formats for one log into `dir` as `<name>.<ext>`.
pub fn emit_all(
    log: &TrajectoryLog,
    dir: impl AsRef<Path>,
    name: &str,
    formats: &[Format],
) -> Result<OutputBundle> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut bundle = OutputBundle::default();
    for format in Format::ALL {
        if !formats.contains(&format) {
            continue;
        }
        let path = dir.join(format!("{name}.{}", format.extension()));
        let written = match format {
            Format::Csv => {
                let p = emit_csv(log, &path)?;
                bundle.csv_path = Some(p.clone());
                p
            }
            Format::Json => {
                let p = emit_json(log, &path)?;
                bundle.json_path = Some(p.clone());
                p
            }
            Format::Svg => {
                let p = emit_circumplex_svg(log, &path)?;
                bundle.svg_path = Some(p.clone());
                p
            }
        };
        bundle.emitted.push(written);
    }
    Ok(bundle)
}
