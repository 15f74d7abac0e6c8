//! Run configuration: flat INI-style sections (JSON accepted as an
//! alternative), parsed strictly; unknown sections or keys are rejected.

use std::collections::BTreeMap;

use virial::error::{Error, Result};
use virial::potentials::{make_coulomb, make_power_law};
use virial::ScaledPotential;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kind: String,
    pub amplitude: f64,
    pub exponent: f64,
    pub strength: f64,
    pub n_dim: u32,
    /// (n, l) pairs.
    pub states: Vec<(u32, u32)>,
    /// Explicit probe exponents for the generalized relation.
    pub probes: Vec<f64>,
    /// Adds the standard probe set {0, 1, 2, 3, 2l+2} + {-2l | l >= 1}.
    pub auto_probes: bool,
    /// Relation families to run: any of general, special, power_law, chains.
    pub relations: Vec<String>,
    pub grid_h: f64,
    pub tol: f64,
    pub orbit: Option<(f64, f64)>,
    pub classical_probes: Vec<u32>,
    pub gap_probe: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kind: "oscillator".into(),
            amplitude: 1.0,
            exponent: 2.0,
            strength: 1.0,
            n_dim: 3,
            states: vec![(0, 0)],
            probes: Vec::new(),
            auto_probes: true,
            relations: vec!["general".into(), "special".into(), "power_law".into(), "chains".into()],
            grid_h: 1e-3,
            tol: 1e-6,
            orbit: None,
            classical_probes: vec![1, 2, 3, 4],
            gap_probe: 3,
        }
    }
}

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn parse_ini(text: &str) -> Result<Sections> {
    let mut sections: Sections = BTreeMap::new();
    let mut current = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(Error::Config(format!("line {}: malformed section", lineno + 1)));
            }
            current = line[1..line.len() - 1].trim().to_lowercase();
            sections.entry(current.clone()).or_default();
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!("line {}: expected key = value", lineno + 1)));
        };
        if current.is_empty() {
            return Err(Error::Config(format!(
                "line {}: key outside any [section]",
                lineno + 1
            )));
        }
        sections
            .get_mut(&current)
            .expect("section created above")
            .insert(key.trim().to_lowercase(), value.trim().to_string());
    }
    Ok(sections)
}

fn parse_json(text: &str) -> Result<Sections> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Config("JSON config must be an object of sections".into()))?;
    let mut sections = Sections::new();
    for (section, body) in obj {
        let body = body.as_object().ok_or_else(|| {
            Error::Config(format!("section '{section}' must be an object"))
        })?;
        let mut map = BTreeMap::new();
        for (key, val) in body {
            let s = match val {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Array(items) => items
                    .iter()
                    .map(render_scalar)
                    .collect::<Result<Vec<_>>>()?
                    .join(", "),
                other => render_scalar(other)?,
            };
            map.insert(key.to_lowercase(), s);
        }
        sections.insert(section.to_lowercase(), map);
    }
    Ok(sections)
}

fn render_scalar(v: &serde_json::Value) -> Result<String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::Bool(b) => Ok(b.to_string()),
        other => Err(Error::Config(format!("unsupported scalar {other}"))),
    }
}

fn parse_f64(section: &str, key: &str, s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Config(format!("[{section}] {key}: '{s}' is not a number")))
}

fn parse_u32(section: &str, key: &str, s: &str) -> Result<u32> {
    s.parse()
        .map_err(|_| Error::Config(format!("[{section}] {key}: '{s}' is not a non-negative integer")))
}

impl RunConfig {
    /// Parse from INI-style text, or JSON when the first non-blank character
    /// is '{'.
    pub fn parse(text: &str) -> Result<Self> {
        let sections = if text.trim_start().starts_with('{') {
            parse_json(text)?
        } else {
            parse_ini(text)?
        };
        Self::from_sections(sections)
    }

    fn from_sections(sections: Sections) -> Result<Self> {
        let mut cfg = RunConfig {
            states: Vec::new(),
            ..RunConfig::default()
        };
        for (section, body) in &sections {
            match section.as_str() {
                "potential" => {
                    for (key, value) in body {
                        match key.as_str() {
                            "kind" => cfg.kind = value.to_lowercase(),
                            "a" => cfg.amplitude = parse_f64(section, key, value)?,
                            "m" => cfg.exponent = parse_f64(section, key, value)?,
                            "strength" => cfg.strength = parse_f64(section, key, value)?,
                            _ => return unknown(section, key),
                        }
                    }
                }
                "dimension" => {
                    for (key, value) in body {
                        match key.as_str() {
                            "n" => cfg.n_dim = parse_u32(section, key, value)?,
                            _ => return unknown(section, key),
                        }
                    }
                }
                "states" => {
                    for (key, value) in body {
                        match key.as_str() {
                            "list" => {
                                cfg.states.clear();
                                for item in value.split(',') {
                                    let item = item.trim();
                                    if item.is_empty() {
                                        continue;
                                    }
                                    let Some((n, l)) = item.split_once(':') else {
                                        return Err(Error::Config(format!(
                                            "[states] list entry '{item}' is not n:l"
                                        )));
                                    };
                                    cfg.states.push((
                                        parse_u32(section, "list", n.trim())?,
                                        parse_u32(section, "list", l.trim())?,
                                    ));
                                }
                            }
                            _ => return unknown(section, key),
                        }
                    }
                }
                "probes" => {
                    for (key, value) in body {
                        match key.as_str() {
                            "j" => {
                                cfg.probes = value
                                    .split(',')
                                    .filter(|s| !s.trim().is_empty())
                                    .map(|s| parse_f64(section, "j", s.trim()))
                                    .collect::<Result<Vec<_>>>()?;
                            }
                            "auto" => {
                                cfg.auto_probes = value.trim() == "true";
                            }
                            _ => return unknown(section, key),
                        }
                    }
                }
                "relations" => {
                    for (key, value) in body {
                        match key.as_str() {
                            "select" => {
                                cfg.relations = value
                                    .split(',')
                                    .map(|s| s.trim().to_lowercase())
                                    .filter(|s| !s.is_empty())
                                    .collect();
                                for r in &cfg.relations {
                                    if !["general", "special", "power_law", "chains"]
                                        .contains(&r.as_str())
                                    {
                                        return Err(Error::Config(format!(
                                            "[relations] unknown family '{r}'"
                                        )));
                                    }
                                }
                            }
                            _ => return unknown(section, key),
                        }
                    }
                }
                "grid" => {
                    for (key, value) in body {
                        match key.as_str() {
                            "h" => cfg.grid_h = parse_f64(section, key, value)?,
                            _ => return unknown(section, key),
                        }
                    }
                }
                "tolerance" => {
                    for (key, value) in body {
                        match key.as_str() {
                            "rel" => cfg.tol = parse_f64(section, key, value)?,
                            _ => return unknown(section, key),
                        }
                    }
                }
                "orbit" => {
                    let mut e = None;
                    let mut l2 = None;
                    for (key, value) in body {
                        match key.as_str() {
                            "e" => e = Some(parse_f64(section, key, value)?),
                            "l2" => l2 = Some(parse_f64(section, key, value)?),
                            _ => return unknown(section, key),
                        }
                    }
                    match (e, l2) {
                        (Some(e), Some(l2)) => cfg.orbit = Some((e, l2)),
                        _ => {
                            return Err(Error::Config(
                                "[orbit] needs both E and l2".into(),
                            ))
                        }
                    }
                }
                "classical" => {
                    for (key, value) in body {
                        match key.as_str() {
                            "f" => {
                                cfg.classical_probes = value
                                    .split(',')
                                    .filter(|s| !s.trim().is_empty())
                                    .map(|s| parse_u32(section, "f", s.trim()))
                                    .collect::<Result<Vec<_>>>()?;
                            }
                            "gap" => cfg.gap_probe = parse_u32(section, key, value)?,
                            _ => return unknown(section, key),
                        }
                    }
                }
                _ => {
                    return Err(Error::Config(format!("unknown section [{section}]")));
                }
            }
        }
        if cfg.states.is_empty() && cfg.orbit.is_none() {
            return Err(Error::Config("no states and no orbit configured".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !["oscillator", "linear", "coulomb", "power_law"].contains(&self.kind.as_str()) {
            return Err(Error::Config(format!(
                "unknown potential kind '{}' (oscillator|linear|coulomb|power_law)",
                self.kind
            )));
        }
        if self.n_dim == 0 {
            return Err(Error::Config("dimension N must be >= 1".into()));
        }
        if !(self.grid_h > 0.0 && self.grid_h < 0.1) {
            return Err(Error::Config(format!(
                "grid h = {} out of range (0, 0.1)",
                self.grid_h
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Construct the configured potential.
    pub fn potential(&self) -> Result<ScaledPotential> {
        match self.kind.as_str() {
            "oscillator" => Ok(ScaledPotential::oscillator()),
            "linear" => Ok(ScaledPotential::linear()),
            "coulomb" => make_coulomb(self.strength),
            "power_law" => make_power_law(self.amplitude, self.exponent),
            other => Err(Error::Config(format!("unknown potential kind '{other}'"))),
        }
    }

    /// Canonical INI text; parsing it reproduces this config exactly.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        out.push_str("[potential]\n");
        out.push_str(&format!("kind = {}\n", self.kind));
        out.push_str(&format!("A = {}\n", self.amplitude));
        out.push_str(&format!("m = {}\n", self.exponent));
        out.push_str(&format!("strength = {}\n", self.strength));
        out.push_str("[dimension]\n");
        out.push_str(&format!("N = {}\n", self.n_dim));
        out.push_str("[states]\n");
        let states: Vec<String> =
            self.states.iter().map(|(n, l)| format!("{n}:{l}")).collect();
        out.push_str(&format!("list = {}\n", states.join(", ")));
        out.push_str("[probes]\n");
        let probes: Vec<String> = self.probes.iter().map(|j| j.to_string()).collect();
        out.push_str(&format!("j = {}\n", probes.join(", ")));
        out.push_str(&format!("auto = {}\n", self.auto_probes));
        out.push_str("[relations]\n");
        out.push_str(&format!("select = {}\n", self.relations.join(", ")));
        out.push_str("[grid]\n");
        out.push_str(&format!("h = {}\n", self.grid_h));
        out.push_str("[tolerance]\n");
        out.push_str(&format!("rel = {}\n", self.tol));
        if let Some((e, l2)) = self.orbit {
            out.push_str("[orbit]\n");
            out.push_str(&format!("E = {e}\n"));
            out.push_str(&format!("l2 = {l2}\n"));
        }
        out.push_str("[classical]\n");
        let fs: Vec<String> = self.classical_probes.iter().map(|f| f.to_string()).collect();
        out.push_str(&format!("f = {}\n", fs.join(", ")));
        out.push_str(&format!("gap = {}\n", self.gap_probe));
        out
    }
}

fn unknown(section: &str, key: &str) -> Result<RunConfig> {
    Err(Error::Config(format!("unknown key '{key}' in [{section}]")))
}
