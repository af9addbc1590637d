//! Sectioned problem files.
//!
//! ```text
//! [ring]
//! xvars = x, y
//! yvars = z
//! field = q
//! [map]
//! F = x^3 + y^3 + z^3
//! [transversal]
//! f = -x
//! r = 1
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use eqsing::checker::{Knobs, ProblemSpec};
use eqsing::curveprobe::CurveSpec;
use eqsing::jacobian::{Family, MapGerm, Transversal};
use eqsing::parse::split_top_level;
use eqsing::{parse, Field, Poly, Ring, Scalar};

const SECTIONS: &[(&str, &[&str])] = &[
    ("ring", &["xvars", "yvars", "params", "field"]),
    ("map", &["F"]),
    ("transversal", &["f", "r"]),
    ("family", &["f", "uvars"]),
    ("singular_locus", &["S"]),
    ("curve", &[]),
    ("options", &["bound", "E", "K", "seed", "guard"]),
];

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    line: usize,
}

/// Raw key/value content of a problem file, keyed by section then key.
#[derive(Clone, Debug, Default)]
pub struct ProblemFile {
    pub text: String,
    sections: BTreeMap<String, Vec<(String, Entry)>>,
}

fn names(list: &str) -> Vec<String> {
    list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile> {
        let mut pf = ProblemFile { text: text.to_string(), sections: BTreeMap::new() };
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            if let Some(name) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let name = name.trim();
                if !SECTIONS.iter().any(|(n, _)| *n == name) {
                    bail!("line {}: unknown section [{}]", line, name);
                }
                if pf.sections.contains_key(name) {
                    bail!("line {}: section [{}] appears twice", line, name);
                }
                pf.sections.insert(name.to_string(), Vec::new());
                current = Some(name.to_string());
                continue;
            }
            let sec = current.as_ref().ok_or_else(|| anyhow!("line {}: `{}` outside any section", line, s))?;
            let (k, v) = s.split_once('=').ok_or_else(|| anyhow!("line {}: expected `key = value`", line))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            let allowed = SECTIONS.iter().find(|(n, _)| n == sec).map(|(_, keys)| *keys).unwrap_or(&[]);
            if sec != "curve" && !allowed.contains(&k.as_str()) {
                bail!("line {}: unknown key `{}` in [{}]", line, k, sec);
            }
            let entries = pf.sections.get_mut(sec).expect("section registered");
            if entries.iter().any(|(e, _)| *e == k) {
                bail!("line {}: key `{}` repeated in [{}]", line, k, sec);
            }
            entries.push((k, Entry { value: v, line }));
        }
        if !pf.sections.contains_key("ring") {
            bail!("missing [ring] section");
        }
        if !pf.sections.contains_key("map") {
            bail!("missing [map] section");
        }
        Ok(pf)
    }

    fn get(&self, sec: &str, key: &str) -> Option<&Entry> {
        self.sections.get(sec)?.iter().find(|(k, _)| k == key).map(|(_, e)| e)
    }

    pub fn has(&self, sec: &str) -> bool {
        self.sections.contains_key(sec)
    }

    fn required(&self, sec: &str, key: &str) -> Result<&Entry> {
        self.get(sec, key).ok_or_else(|| anyhow!("missing `{}` in [{}]", key, sec))
    }

    fn number<T: std::str::FromStr>(&self, sec: &str, key: &str) -> Result<Option<T>> {
        match self.get(sec, key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|_| anyhow!("line {}: `{}` is not a valid number for {}", e.line, e.value, key)),
        }
    }
}

/// Command-line overrides applied on top of a problem file.
#[derive(Clone, Debug, Default, serde::Serialize, serde::Deserialize)]
pub struct Overrides {
    pub real: bool,
    pub r: Option<u32>,
    pub params: Vec<(String, String)>,
    pub n: Option<usize>,
    pub guard: Option<usize>,
    pub e: Option<u32>,
    pub k: Option<usize>,
    pub bound: Option<u32>,
    pub seed: Option<u64>,
    /// Lift tie-break: `smallest` or `largest`.
    pub tie: Option<String>,
    /// Names for the Grassmann chart coordinates.
    pub chart: Vec<String>,
    /// Condition id for `probe`.
    pub condition: Option<String>,
    /// Element `h` for the `closure-membership` condition.
    pub element: Option<String>,
    /// Minor size for `fitting`.
    pub minors: Option<usize>,
}

/// A parsed problem: ring, map components (parameters substituted) and the optional sections.
#[derive(Clone, Debug)]
pub struct Problem {
    pub file: ProblemFile,
    pub ring: Arc<Ring>,
    pub xvars: Vec<String>,
    pub yvars: Vec<String>,
    pub comps: Vec<Poly>,
    pub spec: Option<ProblemSpec>,
    pub knobs: Knobs,
}

fn parse_list(text: &str, ring: &Arc<Ring>, line: usize) -> Result<Vec<Poly>> {
    split_top_level(text)
        .iter()
        .map(|s| parse(s.trim(), ring).map_err(|e| anyhow!("line {}: {}", line, e)))
        .collect()
}

fn parse_scalar(text: &str, field: Field) -> Result<Scalar> {
    let r = Ring::new(&["_"], field);
    let p = parse(text, &r).map_err(|e| anyhow!("parameter value `{}`: {}", text, e))?;
    if !p.is_constant() {
        bail!("parameter value `{}` is not a constant", text);
    }
    Ok(p.constant_term())
}

impl Problem {
    pub fn load(text: &str, ov: &Overrides) -> Result<Problem> {
        let file = ProblemFile::parse(text)?;
        let field = match file.get("ring", "field") {
            None => Field::Q,
            Some(e) => Field::parse(&e.value).ok_or_else(|| anyhow!("line {}: field must be q or qi", e.line))?,
        };
        let xvars = names(&file.required("ring", "xvars")?.value);
        let yvars = file.get("ring", "yvars").map(|e| names(&e.value)).unwrap_or_default();
        let params = file.get("ring", "params").map(|e| names(&e.value)).unwrap_or_default();
        let mut all: Vec<String> = xvars.iter().chain(&yvars).cloned().collect();
        let ring_line = file.required("ring", "xvars")?.line;
        let mut dedup = all.clone();
        dedup.extend(params.iter().cloned());
        dedup.sort();
        if dedup.windows(2).any(|w| w[0] == w[1]) {
            bail!("line {}: variable names must be distinct", ring_line);
        }
        let refs: Vec<&str> = all.iter().map(|s| s.as_str()).collect();
        let ring = Ring::new(&refs, field);
        all.extend(params.iter().cloned());
        let prefs: Vec<&str> = all.iter().map(|s| s.as_str()).collect();
        let full = Ring::new(&prefs, field);

        let mut values: Vec<Option<Scalar>> = vec![None; params.len()];
        for (name, val) in &ov.params {
            let i = params.iter().position(|p| p == name).ok_or_else(|| anyhow!("--param {}: no such parameter", name))?;
            values[i] = Some(parse_scalar(val, field)?);
        }
        let map = file.required("map", "F")?;
        let raw = parse_list(&map.value, &full, map.line)?;
        let images: Vec<Poly> = (0..full.nvars())
            .map(|v| match v.checked_sub(ring.nvars()).and_then(|i| values[i].clone()) {
                Some(c) => Poly::constant(&full, c),
                None => Poly::var(&full, v),
            })
            .collect();
        let comps = raw
            .iter()
            .map(|p| {
                p.substitute(&full, &images).to_ring(&ring).map_err(|_| {
                    let free: Vec<&String> = params.iter().enumerate().filter(|(i, _)| values[*i].is_none()).map(|(_, p)| p).collect();
                    anyhow!("line {}: parameter(s) {:?} have no value; pass --param name=value", map.line, free)
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut knobs = Knobs::default();
        if let Some(v) = file.number("options", "bound")? {
            knobs.bound = v;
        }
        if let Some(v) = file.number("options", "E")? {
            knobs.e = v;
        }
        if let Some(v) = file.number("options", "K")? {
            knobs.k = v;
        }
        if let Some(v) = file.number("options", "seed")? {
            knobs.seed = v;
        }
        if let Some(v) = file.number("options", "guard")? {
            knobs.guard = v;
        }
        if let Some(v) = file.number("curve", "N")? {
            knobs.n = v;
        }
        knobs.bound = ov.bound.unwrap_or(knobs.bound);
        knobs.e = ov.e.unwrap_or(knobs.e);
        knobs.k = ov.k.unwrap_or(knobs.k);
        knobs.seed = ov.seed.unwrap_or(knobs.seed);
        knobs.guard = ov.guard.unwrap_or(knobs.guard);
        knobs.n = ov.n.unwrap_or(knobs.n);

        let mut problem = Problem { file, ring, xvars, yvars, comps, spec: None, knobs };
        if problem.comps.iter().all(|c| c.constant_term().is_zero()) {
            problem.spec = Some(problem.build_spec(ov)?);
        }
        Ok(problem)
    }

    pub fn germ(&self) -> Result<MapGerm> {
        let x: Vec<&str> = self.xvars.iter().map(|s| s.as_str()).collect();
        let y: Vec<&str> = self.yvars.iter().map(|s| s.as_str()).collect();
        MapGerm::from_names(&self.ring, &x, &y, self.comps.clone()).map_err(|e| anyhow!("[map]: {}", e))
    }

    /// The checker's view; only available when every component vanishes at the origin.
    pub fn spec(&self) -> Result<&ProblemSpec> {
        self.spec.as_ref().ok_or_else(|| anyhow!("[map]: components must vanish at the origin"))
    }

    fn build_spec(&self, ov: &Overrides) -> Result<ProblemSpec> {
        let f = &self.file;
        let germ = self.germ()?;
        let mut spec = ProblemSpec::new(germ.clone());
        spec.knobs = self.knobs;
        spec.real = ov.real;
        if let Some(e) = f.get("transversal", "f") {
            let comps = parse_list(&e.value, &self.ring, e.line)?;
            spec.transversal = Some(Transversal::new(&germ, comps).map_err(|err| anyhow!("line {}: {}", e.line, err))?);
        }
        spec.r = f.number("transversal", "r")?;
        if ov.r.is_some() {
            spec.r = ov.r;
        }
        if let Some(e) = f.get("family", "f") {
            let u = names(&f.required("family", "uvars")?.value);
            let mut vars = self.xvars.clone();
            vars.extend(u.iter().cloned());
            let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            let ring = Ring::new(&refs, self.ring.field());
            let comps = parse_list(&e.value, &ring, e.line)?;
            let n = self.xvars.len();
            spec.family = Some(
                Family::new(&ring, (0..n).collect(), (n..n + u.len()).collect(), comps)
                    .map_err(|err| anyhow!("line {}: {}", e.line, err))?,
            );
        }
        if let Some(e) = f.get("singular_locus", "S") {
            spec.s_ideal = Some(parse_list(&e.value, &self.ring, e.line)?);
        }
        if let Some(entries) = f.sections.get("curve") {
            let text: Vec<String> = entries
                .iter()
                .filter(|(k, _)| k != "N")
                .map(|(k, e)| format!("{} = {}", k, e.value))
                .collect();
            if !text.is_empty() {
                let line = entries[0].1.line;
                spec.curve = Some(CurveSpec::parse(&text.join("; "), &self.ring).with_context(|| format!("line {}: [curve]", line))?);
            }
        }
        Ok(spec)
    }
}
