//! Verdicts for (w), Whitney (a), (t^r), (t^{r-}), transversal families, ambient functions
//! and the μ* criteria. Each check runs exact membership, then multiplicity, then curves.

use serde::Serialize;

use crate::curveprobe::{refute, solved_curves, CompSpec, CurveSpec, FamilySpec, RefuteOutcome, Witness};
use crate::error::{Error, Result};
use crate::grassmann::recenter;
use crate::jacobian::{
    jm, jm_x, jm_y, jet_truncate, s_condition_modules, tr_condition_modules, verdier_family_modules, ConditionModules,
    Family, Flavor, MapGerm, Transversal,
};
use crate::localstd::{standard_basis_exact, Budget, Colength, ModuleVec, Submodule, DEFAULT_BOUND};
use crate::multiplicity::{associated_multiplicity, generic_min, milnor_number, mu_star, restrict_to_transversal, Sampling};
use crate::poly::{monomials_in, Poly};
use crate::rng::RationalStream;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Holds,
    Fails,
    Indeterminate,
}

/// Ordered weakest first, so `min` caps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Confidence {
    Heuristic,
    ProvenModuloSampling,
    Proven,
}

/// Numeric knobs shared by every check.
#[derive(Clone, Copy, Debug)]
pub struct Knobs {
    pub n: usize,
    pub guard: usize,
    pub e: u32,
    pub k: usize,
    pub bound: u32,
    pub seed: u64,
}

impl Default for Knobs {
    fn default() -> Knobs {
        Knobs {
            n: crate::curveprobe::DEFAULT_N,
            guard: crate::curveprobe::DEFAULT_GUARD,
            e: crate::curveprobe::DEFAULT_E,
            k: crate::multiplicity::DEFAULT_SAMPLES,
            bound: DEFAULT_BOUND,
            seed: crate::rng::DEFAULT_SEED,
        }
    }
}

impl Knobs {
    pub fn sampling(&self) -> Sampling {
        Sampling { samples: self.k, seed: self.seed, bound: self.bound }
    }

    pub fn curves(&self) -> FamilySpec {
        FamilySpec { e_max: self.e, n: self.n, guard: self.guard, seed: self.seed, ..FamilySpec::default() }
    }
}

#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub germ: MapGerm,
    pub s_ideal: Option<Vec<Poly>>,
    pub transversal: Option<Transversal>,
    pub r: Option<u32>,
    pub family: Option<Family>,
    pub curve: Option<CurveSpec>,
    pub real: bool,
    pub knobs: Knobs,
}

impl ProblemSpec {
    pub fn new(germ: MapGerm) -> ProblemSpec {
        ProblemSpec {
            germ,
            s_ideal: None,
            transversal: None,
            r: None,
            family: None,
            curve: None,
            real: false,
            knobs: Knobs::default(),
        }
    }

    fn transversal_and_order(&self) -> Result<(Transversal, u32)> {
        let r = self.r.ok_or_else(|| Error::Precondition("this check needs a jet order r".into()))?;
        let f = match &self.transversal {
            Some(f) => f.clone(),
            None => Transversal::zero(&self.germ),
        };
        f.validate(&self.germ)?;
        Ok((f, r))
    }

    fn family(&self) -> Result<&Family> {
        self.family.as_ref().ok_or_else(|| Error::Precondition("this check needs a [family] section".into()))
    }

    /// The `[curve]` arc plus, when it has a `solve` component over a monomial skeleton,
    /// every branch the solver finds for that skeleton.
    pub fn skeletons(&self, constraints: &[Poly]) -> Vec<CurveSpec> {
        let Some(c) = &self.curve else { return vec![] };
        let mut out = vec![c.clone()];
        if let Some(v) = c.solve_var() {
            let exps: Option<Vec<u32>> = c
                .comps
                .iter()
                .enumerate()
                .map(|(i, comp)| match comp {
                    _ if i == v => Some(0),
                    CompSpec::Exact(p) if p.is_zero() => Some(0),
                    CompSpec::Exact(p) if p.is_monomial() && p.terms()[0].1.is_one() => Some(p.terms()[0].0.deg()),
                    _ => None,
                })
                .collect();
            if let Some(exps) = exps {
                out.extend(solved_curves(&c.ring, constraints, &exps, v));
            }
        }
        out
    }

    fn curve_family(&self, constraints: &[Poly]) -> FamilySpec {
        FamilySpec { skeletons: self.skeletons(constraints), ..self.knobs.curves() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PathRecord {
    pub path: String,
    pub condition: String,
    pub result: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub point: Vec<String>,
    pub value: Colength,
    pub class: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleTable {
    pub name: String,
    pub seed: u64,
    pub generic: Colength,
    pub rows: Vec<TableRow>,
}

impl SampleTable {
    pub fn new(name: &str, seed: u64, rows: Vec<(Vec<String>, Colength)>) -> SampleTable {
        let values: Vec<Colength> = rows.iter().map(|r| r.1).collect();
        let generic = generic_min(&values);
        let rows = rows
            .into_iter()
            .map(|(point, value)| TableRow { class: classify(value, generic).to_string(), point, value })
            .collect();
        SampleTable { name: name.to_string(), seed, generic, rows }
    }

    pub fn flagged(&self) -> Vec<&TableRow> {
        self.rows.iter().filter(|r| r.class != "generic").collect()
    }
}

fn classify(v: Colength, generic: Colength) -> &'static str {
    match (v, generic) {
        (Colength::Indeterminate, _) | (_, Colength::Indeterminate) => "indeterminate",
        (a, b) if a == b => "generic",
        _ => "jump",
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Evidence {
    pub conditions: Vec<String>,
    pub paths: Vec<PathRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<Colength>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic: Option<Colength>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Vec<Colength>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flagged: Vec<TableRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_transversal: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Evidence {
    fn record(&mut self, path: &str, condition: &str, result: impl Into<String>) {
        self.paths.push(PathRecord { path: path.into(), condition: condition.into(), result: result.into() });
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub confidence: Confidence,
    pub criterion: String,
    pub evidence: Evidence,
    pub witnesses: Vec<Witness>,
    pub samples: Vec<SampleTable>,
}

impl Verdict {
    fn new(outcome: Outcome, confidence: Confidence, criterion: &str, evidence: Evidence) -> Verdict {
        Verdict { outcome, confidence, criterion: criterion.into(), evidence, witnesses: vec![], samples: vec![] }
    }

    fn capped(mut self, cap: Confidence) -> Verdict {
        self.confidence = self.confidence.min(cap);
        self
    }

    pub fn is(&self, o: Outcome) -> bool {
        self.outcome == o
    }
}

/// Every lhs generator reduces to zero modulo the rhs (plus the quotient); `None` on budget overrun.
pub fn exact_inclusion(lhs: &[ModuleVec], rhs: &Submodule, bound: u32) -> Option<bool> {
    let nonzero: Vec<&ModuleVec> = lhs.iter().filter(|g| g.iter().any(|p| !p.is_zero())).collect();
    if nonzero.is_empty() {
        return Some(true);
    }
    let sb = standard_basis_exact(rhs, Budget::for_bound(bound))?;
    for g in nonzero {
        if !sb.reduces_to_zero(g)? {
            return Some(false);
        }
    }
    Some(true)
}

/// `m * M`, for the sufficient test of strict dependence.
fn times_maximal(m: &Submodule) -> Submodule {
    let mut gens = Vec::new();
    for v in 0..m.ring.nvars() {
        let xv = Poly::var(&m.ring, v);
        gens.extend(m.gens.iter().map(|g| g.iter().map(|p| &xv * p).collect::<ModuleVec>()));
    }
    Submodule { ring: m.ring.clone(), rank: m.rank, gens, quotient: m.quotient.clone() }
}

fn exact_path(cm: &ConditionModules, k: &Knobs, ev: &mut Evidence) -> Option<bool> {
    let rhs = match cm.flavor {
        Flavor::Closure => cm.rhs.clone(),
        Flavor::Strict => times_maximal(&cm.rhs),
    };
    let res = exact_inclusion(&cm.lhs.gens, &rhs, k.bound);
    let text = match res {
        Some(true) => "member",
        Some(false) => "not a member of the module itself",
        None => "budget exceeded",
    };
    ev.record("exact-membership", &cm.id, text);
    res
}

fn curve_path(cm: &ConditionModules, fam: &FamilySpec, ev: &mut Evidence) -> Option<Witness> {
    match refute(cm, fam) {
        RefuteOutcome::Refuted(w) => {
            ev.record("curve-refutation", &cm.id, format!("refuted along {}", w.curve));
            Some(*w)
        }
        RefuteOutcome::NoWitnessFound { probed, on_variety, indeterminate } => {
            ev.record(
                "curve-refutation",
                &cm.id,
                format!("no witness ({} arcs probed, {} on the variety, {} indeterminate)", probed, on_variety, indeterminate),
            );
            None
        }
    }
}

fn refuted(criterion: &str, w: Witness, ev: Evidence, cap: Confidence) -> Verdict {
    let mut v = Verdict::new(Outcome::Fails, Confidence::Proven, criterion, ev).capped(cap);
    v.witnesses.push(w);
    v
}

/// Grid `{-1, 0, 1}^dim` (only for `dim <= 3`, else just the origin) followed by `K` random points.
pub fn probe_points(dim: usize, k: &Knobs, label: &str) -> Vec<Vec<Scalar>> {
    let mut pts: Vec<Vec<Scalar>> = vec![vec![]];
    if dim <= 3 {
        for _ in 0..dim {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    [-1i64, 0, 1].into_iter().map(move |c| {
                        let mut q = p.clone();
                        q.push(Scalar::from_int(c));
                        q
                    })
                })
                .collect();
        }
    } else {
        pts = vec![vec![Scalar::zero(); dim]];
    }
    let mut rng = RationalStream::derived(k.seed, label);
    for _ in 0..k.k {
        pts.push(rng.vec(dim));
    }
    pts
}

/// Number of free coefficients in a degree-`r` homogeneous part of a transversal.
pub fn jet_coefficient_count(germ: &MapGerm, r: u32) -> usize {
    germ.k() * monomials_in(germ.ring.nvars(), &germ.x, r).len()
}

/// `j^(r-1) base + Σ c · (degree-r monomials)`, coefficients row-major by component.
pub fn jet_sample(germ: &MapGerm, base: &Transversal, r: u32, coeffs: &[Scalar]) -> Result<Transversal> {
    let monos = monomials_in(germ.ring.nvars(), &germ.x, r);
    if coeffs.len() != germ.k() * monos.len() {
        return Err(Error::Dimension(format!("expected {} jet coefficients, got {}", germ.k() * monos.len(), coeffs.len())));
    }
    let mut comps = Vec::with_capacity(germ.k());
    for j in 0..germ.k() {
        let mut c = if r == 0 { Poly::zero(&germ.ring) } else { base.comps[j].truncate(r - 1) };
        for (i, m) in monos.iter().enumerate() {
            c = &c + &Poly::monomial(&germ.ring, m.clone(), coeffs[j * monos.len() + i].clone());
        }
        comps.push(c);
    }
    let mut t = Transversal::new(germ, comps)?;
    t.jet_order = Some(r);
    Ok(t)
}

/// Generic value of the associated multiplicity over all r-jets sharing the (r-1)-jet of `base`;
/// for `r = 0` the family is the fibres over nearby points of Y.
fn generic_table(germ: &MapGerm, base: &Transversal, r: u32, k: &Knobs) -> Result<SampleTable> {
    let s = k.sampling();
    let mut rows = Vec::new();
    let mut rng = RationalStream::derived(k.seed, &format!("jets(r={})", r));
    for _ in 0..k.k.max(1) {
        if r == 0 {
            let y0 = rng.vec(germ.k());
            let g = recenter(germ, &y0);
            let v = associated_multiplicity(&g, &Transversal::zero(&g), s)?.value;
            rows.push((germ.y_names().iter().zip(&y0).map(|(n, c)| format!("{} = {}", n, c)).collect(), v));
        } else {
            let c = rng.vec(jet_coefficient_count(germ, r));
            let t = jet_sample(germ, base, r, &c)?;
            rows.push((t.display(), associated_multiplicity(germ, &t, s)?.value));
        }
    }
    Ok(SampleTable::new(&format!("associated multiplicity over {}-jets", r), k.seed, rows))
}

fn mult_decision(observed: Colength, generic: Colength) -> Option<Outcome> {
    match (observed, generic) {
        (Colength::Finite(a), Colength::Finite(b)) if a <= b => Some(Outcome::Holds),
        (Colength::Finite(_) | Colength::Infinite, Colength::Finite(_)) => Some(Outcome::Fails),
        _ => None,
    }
}

/// Compares `e(JM(F)_P; O_(X∩P))` with its generic value; `None` when the path does not apply.
fn multiplicity_path(
    germ: &MapGerm,
    f: &Transversal,
    r: u32,
    k: &Knobs,
    shared: Option<&SampleTable>,
    ev: &mut Evidence,
) -> Result<Option<(Outcome, SampleTable)>> {
    if germ.n() <= germ.p() {
        ev.record("multiplicity-genericity", "", "skipped: X∩P is zero-dimensional");
        return Ok(None);
    }
    if r == 0 && !germ.contains_y() {
        ev.record("multiplicity-genericity", "", "skipped: Y is not contained in X");
        return Ok(None);
    }
    let observed = associated_multiplicity(germ, &jet_truncate(f, r), k.sampling())?.value;
    let table = match shared {
        Some(t) => t.clone(),
        None => generic_table(germ, f, r, k)?,
    };
    let generic = generic_min(&[table.generic, observed]);
    ev.observed = Some(observed);
    ev.generic = Some(generic);
    ev.assumptions.push(format!("X is a complete intersection of codimension {}", germ.p()));
    let d = mult_decision(observed, generic);
    ev.record(
        "multiplicity-genericity",
        &format!("associated-multiplicity(r={})", r),
        format!("observed {} vs generic {}", observed, generic),
    );
    Ok(d.map(|o| (o, table)))
}

fn y_in_x(germ: &MapGerm, real: bool, ev: &mut Evidence) -> Result<Confidence> {
    if germ.contains_y() {
        return Ok(Confidence::Proven);
    }
    if real {
        ev.warnings.push("Y is not contained in X; real input accepted, confidence capped at Heuristic".into());
        Ok(Confidence::Heuristic)
    } else {
        Err(Error::Precondition("Y must lie in X: F(0, y) is not identically zero".into()))
    }
}

fn real_note(spec: &ProblemSpec, ev: &mut Evidence) {
    if spec.real {
        ev.assumptions.push("real closure; W assumed metric dense in X - Y".into());
    }
}

fn vacuous(ev: Evidence) -> Verdict {
    Verdict::new(Outcome::Holds, Confidence::Proven, "vacuous", ev)
}

/// Condition modules `JM_y(F) ⊆ closure(m_n JM_x(F))`.
pub fn w_condition_modules(germ: &MapGerm) -> ConditionModules {
    let jx = jm_x(germ);
    let mut rhs = Vec::new();
    for &xi in &germ.x {
        let xv = Poly::var(&germ.ring, xi);
        rhs.extend(jx.gens.iter().map(|g| g.iter().map(|p| &xv * p).collect::<ModuleVec>()));
    }
    ConditionModules {
        lhs: jm_y(germ),
        rhs: Submodule { gens: rhs, ..jx },
        flavor: Flavor::Closure,
        id: "w-condition".into(),
        lhs_labels: germ.y_names().iter().map(|y| format!("dF/d{}", y)).collect(),
        germ: Some(germ.clone()),
        transversal: Some(Transversal::zero(germ)),
    }
}

/// Verdier's condition (w) for X over the y-plane.
pub fn check_w(spec: &ProblemSpec) -> Result<Verdict> {
    let germ = &spec.germ;
    let mut ev = Evidence::default();
    if germ.k() == 0 {
        return Ok(vacuous(ev));
    }
    let cap = y_in_x(germ, spec.real, &mut ev)?;
    real_note(spec, &mut ev);
    let cm = w_condition_modules(germ);
    ev.conditions.push(cm.id.clone());
    if exact_path(&cm, &spec.knobs, &mut ev) == Some(true) {
        return Ok(Verdict::new(Outcome::Holds, Confidence::Proven, "exact-membership", ev).capped(cap));
    }
    let zero = Transversal::zero(germ);
    if let Some((o, table)) = multiplicity_path(germ, &zero, 0, &spec.knobs, None, &mut ev)? {
        let mut v = Verdict::new(o, Confidence::ProvenModuloSampling, "multiplicity-genericity", ev).capped(cap);
        v.samples.push(table);
        return Ok(v);
    }
    if let Some(w) = curve_path(&cm, &spec.curve_family(&germ.comps), &mut ev) {
        return Ok(refuted("curve-refutation", w, ev, cap));
    }
    Ok(Verdict::new(Outcome::Indeterminate, Confidence::Heuristic, "no-conclusive-path", ev))
}

/// Strict dependence of `∂F/∂y` on `JM(F)`, refuted along arcs. Never returns `Holds` unless Y is a point.
pub fn refute_whitney_a(spec: &ProblemSpec, fam: &FamilySpec) -> Result<Verdict> {
    let germ = &spec.germ;
    let mut ev = Evidence::default();
    if germ.k() == 0 {
        return Ok(vacuous(ev));
    }
    if !germ.contains_y() {
        return Err(Error::Precondition("Y must lie in X: F(0, y) is not identically zero".into()));
    }
    let cm = whitney_a_modules(germ);
    ev.conditions.push(cm.id.clone());
    let mut fam = fam.clone();
    for s in spec.skeletons(&germ.comps) {
        if !fam.skeletons.contains(&s) {
            fam.skeletons.push(s);
        }
    }
    if let Some(w) = curve_path(&cm, &fam, &mut ev) {
        return Ok(refuted("curve-refutation", w, ev, Confidence::Proven));
    }
    ev.warnings.push("Whitney (a) has no positive criterion here; only refutation is attempted".into());
    Ok(Verdict::new(Outcome::Indeterminate, Confidence::Heuristic, "no-conclusive-path", ev))
}

/// `JM_y(F) ⊆ JM(F)†`.
pub fn whitney_a_modules(germ: &MapGerm) -> ConditionModules {
    ConditionModules {
        lhs: jm_y(germ),
        rhs: jm(germ),
        flavor: Flavor::Strict,
        id: "whitney-a-strict".into(),
        lhs_labels: germ.y_names().iter().map(|y| format!("dF/d{}", y)).collect(),
        germ: Some(germ.clone()),
        transversal: None,
    }
}

/// (t^r) for the transversal given by the r-jet of `f`.
pub fn check_tr(spec: &ProblemSpec) -> Result<Verdict> {
    let (f, r) = spec.transversal_and_order()?;
    check_tr_with(spec, &f, r, None)
}

fn check_tr_with(spec: &ProblemSpec, f0: &Transversal, r: u32, shared: Option<&SampleTable>) -> Result<Verdict> {
    let germ = &spec.germ;
    let f = jet_truncate(f0, r);
    let mut ev = Evidence::default();
    let cap = if r == 0 { y_in_x(germ, spec.real, &mut ev)? } else { Confidence::Proven };
    real_note(spec, &mut ev);
    let cm = tr_condition_modules(germ, &f, r, Flavor::Closure)?;
    ev.conditions.push(cm.id.clone());
    let scm = match &spec.s_ideal {
        Some(s) => {
            let m = s_condition_modules(germ, s, &f, r)?;
            ev.conditions.push(m.id.clone());
            Some(m)
        }
        None => {
            ev.warnings.push("no singular locus given; the condition on S was not checked".into());
            None
        }
    };
    let main = exact_path(&cm, &spec.knobs, &mut ev);
    let s_ok = match &scm {
        Some(m) => exact_path(m, &spec.knobs, &mut ev) == Some(true),
        None => true,
    };
    if main == Some(true) && s_ok {
        return Ok(Verdict::new(Outcome::Holds, Confidence::Proven, "exact-membership", ev).capped(cap));
    }
    let mult_cap = if spec.real { Confidence::Heuristic } else { cap };
    if let Some((o, table)) = multiplicity_path(germ, &f, r, &spec.knobs, shared, &mut ev)? {
        let mut v = Verdict::new(o, Confidence::ProvenModuloSampling, "multiplicity-genericity", ev).capped(mult_cap);
        v.samples.push(table);
        return Ok(v);
    }
    if let Some(m) = &scm {
        if let Some(w) = curve_path(m, &spec.knobs.curves(), &mut ev) {
            return Ok(refuted("s-condition-probe", w, ev, cap));
        }
    }
    if let Some(w) = curve_path(&cm, &spec.curve_family(&germ.comps), &mut ev) {
        return Ok(refuted("curve-refutation", w, ev, cap));
    }
    Ok(Verdict::new(Outcome::Indeterminate, Confidence::Heuristic, "no-conclusive-path", ev))
}

/// (t^{r-}): strict dependence, with the positive side decided on sampled degree-r representatives.
pub fn check_tr_minus(spec: &ProblemSpec) -> Result<Verdict> {
    let (f0, r) = spec.transversal_and_order()?;
    if r == 0 {
        return Err(Error::OutOfRange("the strict variant needs r >= 1".into()));
    }
    let germ = &spec.germ;
    let f = jet_truncate(&f0, r);
    let mut ev = Evidence::default();
    real_note(spec, &mut ev);
    let cm = tr_condition_modules(germ, &f, r, Flavor::Strict)?;
    ev.conditions.push(cm.id.clone());
    if exact_path(&cm, &spec.knobs, &mut ev) == Some(true) {
        return Ok(Verdict::new(Outcome::Holds, Confidence::Proven, "exact-membership", ev));
    }
    let shared = if germ.n() > germ.p() { Some(generic_table(germ, &f, r, &spec.knobs)?) } else { None };
    let count = jet_coefficient_count(germ, r);
    let points = probe_points(count, &spec.knobs, "representatives");
    let mut all_hold = true;
    let mut rows = Vec::new();
    for pt in &points {
        let rep = jet_sample(germ, &f, r, pt)?;
        let v = check_tr_with(spec, &rep, r, shared.as_ref())?;
        rows.push((rep.display(), match v.outcome {
            Outcome::Holds => Colength::Finite(0),
            Outcome::Fails => Colength::Finite(1),
            Outcome::Indeterminate => Colength::Indeterminate,
        }));
        match v.outcome {
            Outcome::Fails => {
                ev.record("jet-sampling", &cm.id, format!("representative {} fails ({})", rep.display().join(", "), v.criterion));
                ev.failing_transversal = Some(rep.display());
                let mut out = Verdict::new(Outcome::Fails, v.confidence, "jet-sampling", ev);
                out.witnesses = v.witnesses;
                out.samples = v.samples;
                return Ok(out);
            }
            Outcome::Indeterminate => all_hold = false,
            Outcome::Holds => {}
        }
    }
    ev.record("jet-sampling", &cm.id, format!("{} representatives checked", rows.len()));
    if all_hold && !rows.is_empty() {
        let mut v = Verdict::new(Outcome::Holds, Confidence::ProvenModuloSampling, "jet-sampling", ev);
        v.samples.extend(shared);
        return Ok(v);
    }
    if let Some(w) = curve_path(&cm, &spec.curve_family(&germ.comps), &mut ev) {
        return Ok(refuted("curve-refutation", w, ev, Confidence::Proven));
    }
    Ok(Verdict::new(Outcome::Indeterminate, Confidence::Heuristic, "no-conclusive-path", ev))
}

fn family_points(fam: &Family, k: &Knobs) -> Vec<Vec<Scalar>> {
    probe_points(fam.u.len(), k, "family")
}

fn param_text(fam: &Family, p: &[Scalar]) -> Vec<String> {
    fam.u.iter().zip(p).map(|(&u, c)| format!("{} = {}", fam.ring.name(u), c)).collect()
}

/// Decision at the base point `u = 0` of a sampled invariant table.
fn base_decision(table: &SampleTable, base: Colength, criterion: &str, mut ev: Evidence) -> Verdict {
    ev.observed = Some(base);
    ev.generic = Some(table.generic);
    ev.flagged = table.flagged().into_iter().cloned().collect();
    let mut v = match mult_decision(base, table.generic) {
        Some(o) => Verdict::new(o, Confidence::ProvenModuloSampling, criterion, ev),
        None => Verdict::new(Outcome::Indeterminate, Confidence::Heuristic, criterion, ev),
    };
    v.samples.push(table.clone());
    v
}

/// Table `u ↦ e(JM(F)_(P(u)); O_(X∩P(u)))`, its generic value and the verdict at `u = 0`.
pub fn analyze_family(spec: &ProblemSpec) -> Result<Verdict> {
    let germ = &spec.germ;
    let fam = spec.family()?;
    let mut ev = Evidence::default();
    real_note(spec, &mut ev);
    match fam.varying_order() {
        Some(r) => ev.conditions.push(format!("family fixes the {}-jet", r as i64 - 1)),
        None => ev.warnings.push("family does not depend on its parameters".into()),
    }
    let s = spec.knobs.sampling();
    let mut rows = Vec::new();
    let mut base = None;
    for p in family_points(fam, &spec.knobs) {
        let t = fam.at(germ, &p)?;
        let v = associated_multiplicity(germ, &t, s)?.value;
        if base.is_none() && p.iter().all(|c| c.is_zero()) {
            base = Some(v);
        }
        rows.push((param_text(fam, &p), v));
    }
    let table = SampleTable::new("associated multiplicity over the family", spec.knobs.seed, rows);
    ev.record("multiplicity-genericity", "family", format!("generic value {}", table.generic));
    ev.assumptions.push(format!("X is a complete intersection of codimension {}", germ.p()));
    Ok(base_decision(&table, base.unwrap_or(Colength::Indeterminate), "multiplicity-genericity", ev))
}

/// Verdier equisingular intersection of the family of graphs with X, decided by membership and arcs.
pub fn check_verdier_family(spec: &ProblemSpec) -> Result<Verdict> {
    let germ = &spec.germ;
    let fam = spec.family()?;
    let mut ev = Evidence::default();
    real_note(spec, &mut ev);
    let cm = verdier_family_modules(germ, fam)?;
    ev.conditions.push(cm.id.clone());
    if exact_path(&cm, &spec.knobs, &mut ev) == Some(true) {
        return Ok(Verdict::new(Outcome::Holds, Confidence::Proven, "exact-membership", ev));
    }
    if let Some(w) = curve_path(&cm, &spec.knobs.curves(), &mut ev) {
        return Ok(refuted("curve-refutation", w, ev, Confidence::Proven));
    }
    Ok(Verdict::new(Outcome::Indeterminate, Confidence::Heuristic, "no-conclusive-path", ev))
}

fn restricted_milnor(germ: &MapGerm, f: &Transversal, bound: u32) -> Result<Colength> {
    let (_, comps, _) = restrict_to_transversal(germ, f)?;
    milnor_number(&comps[0], bound)
}

/// Ambient version for a function `g` (the first component); further components define X.
pub fn check_ambient_tr(spec: &ProblemSpec) -> Result<Verdict> {
    let germ = &spec.germ;
    if germ.p() > 1 {
        let mut v = check_tr(spec)?;
        v.evidence.warnings.push("X is not the ambient space; decided through the condition modules of (g, G)".into());
        return Ok(v);
    }
    let mut ev = Evidence::default();
    real_note(spec, &mut ev);
    let bound = spec.knobs.bound;
    if let Some(fam) = &spec.family {
        ev.conditions.push("milnor-number-of-restriction(family)".into());
        let mut rows = Vec::new();
        let mut base = None;
        for p in family_points(fam, &spec.knobs) {
            let v = restricted_milnor(germ, &fam.at(germ, &p)?, bound)?;
            if base.is_none() && p.iter().all(|c| c.is_zero()) {
                base = Some(v);
            }
            rows.push((param_text(fam, &p), v));
        }
        let table = SampleTable::new("milnor number of g|P over the family", spec.knobs.seed, rows);
        ev.record("multiplicity-genericity", "family", format!("generic value {}", table.generic));
        return Ok(base_decision(&table, base.unwrap_or(Colength::Indeterminate), "milnor-genericity", ev));
    }
    let (f0, r) = spec.transversal_and_order()?;
    let f = jet_truncate(&f0, r);
    ev.conditions.push(format!("milnor-number-of-restriction(r={})", r));
    let mut rng = RationalStream::derived(spec.knobs.seed, &format!("ambient(r={})", r));
    let mut rows = Vec::new();
    for _ in 0..spec.knobs.k.max(1) {
        let t = jet_sample(germ, &f, r, &rng.vec(jet_coefficient_count(germ, r)))?;
        rows.push((t.display(), restricted_milnor(germ, &t, bound)?));
    }
    let observed = restricted_milnor(germ, &f, bound)?;
    rows.push((f.display(), observed));
    let table = SampleTable::new(&format!("milnor number of g|P over {}-jets", r), spec.knobs.seed, rows);
    ev.record("multiplicity-genericity", "jets", format!("observed {} vs generic {}", observed, table.generic));
    Ok(base_decision(&table, observed, "milnor-genericity", ev))
}

/// Sufficient μ* criteria for Verdier equisingularity of `{X ∩ P(u)}`; never returns `Fails`.
pub fn check_mu_criteria(spec: &ProblemSpec) -> Result<Verdict> {
    let germ = &spec.germ;
    let fam = spec.family()?;
    let k = germ.k();
    if k == 0 {
        return Err(Error::Dimension("the criteria need k >= 1".into()));
    }
    let mut ev = Evidence::default();
    real_note(spec, &mut ev);
    let s = spec.knobs.sampling();
    let hyper = germ.p() == 1;
    let total = mu_star(&germ.comps, s)?;
    let want1 = total.sequence.get(k + 1).copied();
    let want2 = total.sequence.get(k + 2).copied();
    ev.sequence = Some(total.sequence.clone());
    ev.conditions.push(if hyper { "mu-constancy-hypersurface".into() } else { "mu-sections-complete-intersection".into() });
    ev.assumptions.push("P(u) meets the singular locus of X only at 0".into());
    let (mut mu0, mut mu1, mut mu2) = (Vec::new(), Vec::new(), Vec::new());
    for p in family_points(fam, &spec.knobs) {
        let t = fam.at(germ, &p)?;
        let (_, comps, _) = restrict_to_transversal(germ, &t)?;
        let seq = mu_star(&comps, s)?.sequence;
        let label = param_text(fam, &p);
        mu0.push((label.clone(), seq[0]));
        mu1.push((label.clone(), seq.get(1).copied().unwrap_or(Colength::Indeterminate)));
        mu2.push((label, seq.get(2).copied().unwrap_or(Colength::Indeterminate)));
    }
    let same = |rows: &[(Vec<String>, Colength)], want: Option<Colength>| match want {
        Some(Colength::Finite(w)) => rows.iter().all(|r| r.1 == Colength::Finite(w)),
        _ => false,
    };
    let first = mu0[0].1;
    let ok = if hyper {
        first.finite().is_some() && mu0.iter().all(|r| r.1 == first) && same(&mu1, want1)
    } else {
        same(&mu1, want1) && same(&mu2, want2)
    };
    ev.record(
        "mu-sequence",
        &ev.conditions[0].clone(),
        format!(
            "mu*(X) = ({})",
            total.sequence.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        ),
    );
    let tables = vec![
        SampleTable::new("mu(X∩P)", spec.knobs.seed, mu0),
        SampleTable::new("mu_1(X∩P)", spec.knobs.seed, mu1),
        SampleTable::new("mu_2(X∩P)", spec.knobs.seed, mu2),
    ];
    let mut v = if ok {
        Verdict::new(Outcome::Holds, Confidence::ProvenModuloSampling, if hyper { "mu-constancy" } else { "mu-sections" }, ev)
    } else {
        ev.warnings.push("the criteria are sufficient only; a mismatch proves nothing".into());
        Verdict::new(Outcome::Indeterminate, Confidence::Heuristic, "criterion-inconclusive", ev)
    };
    v.samples = tables;
    Ok(v)
}
