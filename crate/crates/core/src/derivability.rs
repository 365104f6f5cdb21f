//! Local derivability: window-equality checks, verification of local
//! derivation between patterns, executable local rules and MLD witnesses,
//! and exact symmetry-group computation.

use crate::error::{Error, Result};
use crate::geometry::{GroupSpec, Isometry, Point, PointGroupElement, Window};
use crate::lattice::Lattice;
use crate::num::Q;
use crate::pattern::{supremum, AbstractPattern, PatternFamily, PatternKind};
use crate::rep::Component;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Which space a pattern lives over: Euclidean space or the isometry group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceFlavor {
    Euclidean,
    Group,
}

pub fn flavor_of(p: &AbstractPattern) -> SpaceFlavor {
    match p.kind {
        PatternKind::Plan => SpaceFlavor::Group,
        _ => SpaceFlavor::Euclidean,
    }
}

/// Ball window around the base point (the origin, or the identity).
pub fn base_window(flavor: SpaceFlavor, dim: usize, radius: &Q) -> Window {
    match flavor {
        SpaceFlavor::Euclidean => Window::ball(Point::origin(dim), radius.clone()),
        SpaceFlavor::Group => Window::group_ball(Isometry::identity(dim), radius.clone()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Candidates exhaust the pattern's configuration classes per period.
    PeriodExhaustive,
    /// Candidates are a deterministic sample (finite patterns, custom lists).
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub gamma: Isometry,
    pub eta: Isometry,
    pub radius: Q,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub certificate: Certificate,
    pub checked_cases: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub fn pass(certificate: Certificate, checked_cases: u64) -> Verdict {
        Verdict {
            status: VerdictStatus::Pass,
            certificate,
            checked_cases,
            counterexample: None,
        }
    }

    pub fn fail(certificate: Certificate, checked_cases: u64, ce: Counterexample) -> Verdict {
        Verdict {
            status: VerdictStatus::Fail,
            certificate,
            checked_cases,
            counterexample: Some(ce),
        }
    }

    pub fn undecided(reason: &str) -> Verdict {
        Verdict {
            status: VerdictStatus::Undecided,
            certificate: Certificate::Sampled,
            checked_cases: 0,
            counterexample: Some(Counterexample {
                gamma: Isometry::identity(1),
                eta: Isometry::identity(1),
                radius: Q::zero(),
                description: reason.to_string(),
            }),
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == VerdictStatus::Pass
    }
}

/// The window view (g p) cut to w, computed without materializing g p.
pub fn window_view(p: &AbstractPattern, g: &Isometry, w: &Window) -> Result<AbstractPattern> {
    let pulled = w.transform(&g.inverse());
    p.cut(&pulled)?.act(g)
}

/// Exact equality of (g p) and (h p) on the window.
pub fn window_equal(
    p: &AbstractPattern,
    g: &Isometry,
    h: &Isometry,
    w: &Window,
) -> Result<bool> {
    if w.is_all() && !p.is_finitely_supported() {
        return Err(Error::UnboundedRequest(
            "window equality on ALL against an infinite pattern".into(),
        ));
    }
    Ok(window_view(p, g, w)? == window_view(p, h, w)?)
}

/// How candidate group elements are generated for derivation checks.
#[derive(Clone, Debug)]
pub enum CandidateGen {
    /// Anchor-generated: views at motif representatives (and near-anchor
    /// probe offsets), composed with every point-group element. Exhaustive
    /// per period for periodic patterns.
    Auto,
    /// Explicit list of candidate views.
    Views(Vec<Isometry>),
}

/// Deterministic off-anchor probe offsets, chosen to miss anchors of the
/// rational patterns under test.
fn probe_offsets(dim: usize) -> Vec<Point> {
    let mk = |num: i64, den: i64| Q::ratio(num, den);
    match dim {
        1 => vec![Point(vec![mk(1, 3)]), Point(vec![mk(5, 7)])],
        2 => vec![
            Point(vec![mk(1, 3), mk(1, 7)]),
            Point(vec![mk(5, 7), mk(2, 5)]),
        ],
        _ => vec![Point(vec![mk(1, 3), mk(1, 7), mk(1, 11)])],
    }
}

/// Translations that are periods of `p` but possibly not of `q`: coset
/// representatives of the source period lattice modulo its intersection with
/// the target period lattice. Distinct views of `q` under source periods are
/// exactly indexed by these representatives.
fn period_coset_shifts(p: &AbstractPattern, q: &AbstractPattern) -> Vec<Point> {
    let Some(lp) = p.period_lattice() else {
        return vec![];
    };
    match q.period_lattice() {
        None => {
            // Against a finitely supported target, one shell of source
            // periods probes the mismatch.
            let mut out: Vec<Point> = lp.basis().to_vec();
            out.extend(lp.basis().iter().map(Point::neg));
            out
        }
        Some(lq) => match lp.intersect(&lq) {
            Ok(meet) => lp
                .coset_representatives(&meet)
                .into_iter()
                .filter(|r| !r.is_zero())
                .collect(),
            Err(_) => vec![],
        },
    }
}

/// Candidate "views" for the source pattern of a derivation check against
/// target `q`: isometries g such that g p is inspected around the base point.
/// Covers the source motif anchors, source periods that are not common
/// periods with the target, off-anchor and far probes, all composed with the
/// point group.
pub fn candidate_views(p: &AbstractPattern, q: &AbstractPattern) -> Vec<Isometry> {
    let dim = p.dimension;
    let group = &p.group;
    let coset_shifts = period_coset_shifts(p, q);
    let mut seeds: Vec<Isometry> = Vec::new();
    match flavor_of(p) {
        SpaceFlavor::Euclidean => {
            let mut anchors = p.motif_anchor_points();
            let base: Vec<Point> = anchors.clone();
            for shift in &coset_shifts {
                anchors.extend(base.iter().map(|a| a.add(shift)));
            }
            let with_shifts = anchors.clone();
            for off in probe_offsets(dim) {
                anchors.extend(with_shifts.iter().map(|a| a.add(&off)));
                anchors.push(off);
            }
            if anchors.is_empty() {
                anchors.push(Point::origin(dim));
            }
            // A far probe outside any bounded support.
            if let Some(b) = p.support_enclosure() {
                let mut far = Point::origin(dim);
                far.0[0] = &b.radius + Q::from_int(5);
                anchors.push(b.center.add(&far));
            }
            for x in anchors {
                seeds.push(Isometry::translate(x.neg()));
            }
        }
        SpaceFlavor::Group => {
            if let crate::pattern::Payload::Plan(plan) = &p.payload {
                for e in &plan.entries {
                    for iso in e.motif() {
                        seeds.push(iso.inverse());
                        for shift in &coset_shifts {
                            seeds.push(iso.translated(shift).inverse());
                        }
                    }
                }
            }
            if seeds.is_empty() {
                seeds.push(Isometry::identity(dim));
            }
            // Off-anchor probe in the group: shift by a generic translation.
            let off = probe_offsets(dim).remove(0);
            let extra: Vec<Isometry> = seeds
                .iter()
                .map(|s| Isometry::translate(off.neg()).compose(s))
                .collect();
            seeds.extend(extra);
        }
    }
    let mut out = Vec::new();
    for rot in &group.point_group {
        let r = Isometry::new(Point::origin(dim), rot.clone());
        for s in &seeds {
            out.push(r.compose(s));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Checks the derivation condition: whenever two candidate views of `p`
/// agree on B(base, R + r0), the corresponding views of `q` agree on
/// B(base, R). Exhaustive per period for periodic `p`; a falsifier/verifier,
/// not a decision procedure.
pub fn check_local_derivation(
    p: &AbstractPattern,
    q: &AbstractPattern,
    r0: &Q,
    radii: &[Q],
    candidates: &CandidateGen,
) -> Result<Verdict> {
    if r0.is_negative() {
        return Err(Error::InvalidRule("negative derivation margin".into()));
    }
    let views = match candidates {
        CandidateGen::Auto => candidate_views(p, q),
        CandidateGen::Views(v) => v.clone(),
    };
    let certificate = match candidates {
        CandidateGen::Auto if p.period_lattice().is_some() => Certificate::PeriodExhaustive,
        _ => Certificate::Sampled,
    };
    let p_flavor = flavor_of(p);
    let q_flavor = flavor_of(q);
    let mut checked: u64 = 0;
    for radius in radii {
        let w_in = base_window(p_flavor, p.dimension, &(radius + r0));
        let w_out = base_window(q_flavor, q.dimension, radius);
        // Group candidate views by their input-window fingerprint; the
        // derivation condition constrains exactly the pairs inside a group.
        let mut groups: BTreeMap<AbstractPattern, Vec<&Isometry>> = BTreeMap::new();
        for g in &views {
            let fp = window_view(p, g, &w_in)?;
            groups.entry(fp).or_default().push(g);
        }
        for members in groups.values() {
            if members.len() < 2 {
                continue;
            }
            let first = members[0];
            let out_first = window_view(q, first, &w_out)?;
            for other in &members[1..] {
                checked += 1;
                let out_other = window_view(q, other, &w_out)?;
                if out_other != out_first {
                    return Ok(Verdict::fail(
                        certificate,
                        checked,
                        Counterexample {
                            gamma: first.clone(),
                            eta: (*other).clone(),
                            radius: radius.clone(),
                            description: format!(
                                "source views agree on radius {} + {} but target views differ on radius {}",
                                radius, r0, radius
                            ),
                        },
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass(certificate, checked))
}

/// A finite template -> output table realizing a local derivation with a
/// declared margin. Templates are source windows of radius `template_radius`
/// around the base point; outputs are target windows of radius
/// `output_radius`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRule {
    pub margin: Q,
    pub template_radius: Q,
    pub output_radius: Q,
    pub source_flavor: SpaceFlavor,
    pub target_flavor: SpaceFlavor,
    pub table: Vec<(AbstractPattern, AbstractPattern)>,
}

impl LocalRule {
    pub fn validate(&self) -> Result<()> {
        if self.template_radius < self.margin {
            return Err(Error::InvalidRule(
                "template radius below the declared margin".into(),
            ));
        }
        for (i, (t, _)) in self.table.iter().enumerate() {
            for (t2, _) in &self.table[i + 1..] {
                if t == t2 {
                    return Err(Error::InvalidRule("duplicate templates".into()));
                }
            }
            if !t.is_finitely_supported() {
                return Err(Error::InvalidRule("template must be finite".into()));
            }
        }
        Ok(())
    }
}

/// Builds the rule whose templates are the source views at every motif
/// anchor and whose outputs are the target views there. Fails when two equal
/// templates would demand different outputs.
pub fn rule_from_patterns(
    source: &AbstractPattern,
    target: &AbstractPattern,
    margin: &Q,
    template_radius: &Q,
    output_radius: &Q,
) -> Result<LocalRule> {
    if template_radius < margin {
        return Err(Error::InvalidRule(
            "template radius below the declared margin".into(),
        ));
    }
    let anchors = anchor_isometries(source);
    if anchors.is_empty() {
        return Err(Error::InvalidRule(
            "source pattern has no anchors to read templates from".into(),
        ));
    }
    let sf = flavor_of(source);
    let tf = flavor_of(target);
    let w_in = base_window(sf, source.dimension, template_radius);
    let w_out = base_window(tf, target.dimension, output_radius);
    let mut table: Vec<(AbstractPattern, AbstractPattern)> = Vec::new();
    for anchor in anchors {
        let inv = anchor.inverse();
        let template = window_view(source, &inv, &w_in)?;
        let output = window_view(target, &inv, &w_out)?;
        match table.iter().find(|(t, _)| *t == template) {
            Some((_, existing)) => {
                if *existing != output {
                    return Err(Error::InvalidRule(
                        "equal templates with conflicting outputs".into(),
                    ));
                }
            }
            None => table.push((template, output)),
        }
    }
    table.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(LocalRule {
        margin: margin.clone(),
        template_radius: template_radius.clone(),
        output_radius: output_radius.clone(),
        source_flavor: sf,
        target_flavor: tf,
        table,
    })
}

/// Anchor isometries of a pattern: pure translations to component anchors
/// (Euclidean kinds) or the member isometries themselves (plans). Periodic
/// payloads contribute their motif representatives.
pub fn anchor_isometries(p: &AbstractPattern) -> Vec<Isometry> {
    match &p.payload {
        crate::pattern::Payload::Plan(plan) => {
            let mut out: Vec<Isometry> = plan
                .entries
                .iter()
                .flat_map(|e| e.motif().iter().cloned())
                .collect();
            out.sort();
            out.dedup();
            out
        }
        _ => p
            .motif_anchor_points()
            .into_iter()
            .map(Isometry::translate)
            .collect(),
    }
}

/// Anchor isometries of `p` whose emissions can meet the target window:
/// anchors within (window radius + reach) of the window center.
fn anchors_near_window(
    p: &AbstractPattern,
    w: &Window,
    reach: &Q,
) -> Result<Vec<Isometry>> {
    let (center_point, radius) = match w {
        Window::Balls(balls) => (balls[0].center.clone(), balls[0].radius.clone()),
        Window::GroupBalls(balls) => (
            balls[0].center.translation.clone(),
            balls[0].radius.clone(),
        ),
        Window::Empty => return Ok(vec![]),
        Window::All => {
            return if p.is_finitely_supported() {
                Ok(anchor_isometries(p))
            } else {
                Err(Error::UnboundedRequest(
                    "rule application on ALL against an infinite pattern".into(),
                ))
            }
        }
    };
    let search = &radius + reach;
    match &p.payload {
        crate::pattern::Payload::Plan(plan) => Ok(plan
            .members_near(&Isometry::translate(center_point), &search)
            .into_iter()
            .map(|(_, iso)| iso)
            .collect()),
        _ => Ok(p
            .anchor_points_near(&center_point, &search)
            .into_iter()
            .map(Isometry::translate)
            .collect()),
    }
}

/// Executes a local rule on `p`, producing the glued emissions cut to `w`.
/// Matching tries every anchor composed with every point-group element;
/// template lookups are cached per anchor class modulo the period lattice.
pub fn apply_rule(rule: &LocalRule, p: &AbstractPattern, w: &Window) -> Result<AbstractPattern> {
    rule.validate()?;
    if flavor_of(p) != rule.source_flavor {
        return Err(Error::InvalidRule(
            "rule source flavor does not match the pattern".into(),
        ));
    }
    // Only the emission footprint decides which anchors are relevant.
    let reach = &rule.output_radius
        + crate::geometry::rotation_metric_margin(p.dimension)
        + Q::one();
    let anchors = anchors_near_window(p, w, &reach)?;
    let w_in = base_window(rule.source_flavor, p.dimension, &rule.template_radius);
    let period = p.period_lattice();
    let mut cache: BTreeMap<(Point, PointGroupElement, PointGroupElement), Option<usize>> =
        BTreeMap::new();
    let mut emissions: Vec<AbstractPattern> = Vec::new();
    let mut space: Option<crate::pattern::SpaceSpec> = None;
    for anchor in anchors {
        for rot in &p.group.point_group {
            let g = anchor.compose(&Isometry::new(
                Point::origin(p.dimension),
                rot.clone(),
            ));
            // Views repeat along the period lattice of p.
            let key = {
                let reduced = match &period {
                    Some(l) => l.reduce(&g.translation).0,
                    None => g.translation.clone(),
                };
                (reduced, g.rotation.clone(), anchor.rotation.clone())
            };
            let hit = match cache.get(&key) {
                Some(h) => h.clone(),
                None => {
                    let view = window_view(p, &g.inverse(), &w_in)?;
                    let idx = rule.table.iter().position(|(t, _)| *t == view);
                    cache.insert(key, idx);
                    idx
                }
            };
            if let Some(idx) = hit {
                let emitted = rule.table[idx].1.act(&g)?.cut(w)?;
                if space.is_none() {
                    space = Some(emitted.space());
                }
                emissions.push(emitted);
                break;
            }
        }
    }
    let space = match space {
        Some(s) => s,
        None => {
            let (_, out) = rule
                .table
                .first()
                .ok_or_else(|| Error::InvalidRule("empty rule table".into()))?;
            out.space()
        }
    };
    supremum(&space, &PatternFamily::Finite(emissions))
}

/// A two-sided local-derivation witness with its verification radii.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MLDWitness {
    pub forward: LocalRule,
    pub backward: LocalRule,
    pub test_radii: Vec<Q>,
}

/// Verifies both derivation directions and that the rules reproduce the
/// respective cuts on every test window.
pub fn verify_mld_witness(
    witness: &MLDWitness,
    p: &AbstractPattern,
    q: &AbstractPattern,
    radii: Option<&[Q]>,
) -> Result<Verdict> {
    let radii: Vec<Q> = radii
        .map(|r| r.to_vec())
        .unwrap_or_else(|| witness.test_radii.clone());
    if radii.is_empty() {
        return Err(Error::InvalidRule("no test radii declared".into()));
    }
    let fwd = check_local_derivation(p, q, &witness.forward.margin, &radii, &CandidateGen::Auto)?;
    if !fwd.is_pass() {
        return Ok(fwd);
    }
    let bwd = check_local_derivation(q, p, &witness.backward.margin, &radii, &CandidateGen::Auto)?;
    if !bwd.is_pass() {
        return Ok(bwd);
    }
    let mut checked = fwd.checked_cases + bwd.checked_cases;
    for radius in &radii {
        let w_q = base_window(flavor_of(q), q.dimension, radius);
        let expected_q = q.cut(&w_q)?;
        let produced_q = match apply_rule(&witness.forward, p, &w_q) {
            Ok(x) => x,
            Err(e) => {
                return Ok(Verdict::fail(
                    fwd.certificate,
                    checked,
                    Counterexample {
                        gamma: Isometry::identity(p.dimension),
                        eta: Isometry::identity(p.dimension),
                        radius: radius.clone(),
                        description: format!("forward rule application failed: {e}"),
                    },
                ))
            }
        };
        checked += 1;
        if produced_q != expected_q {
            return Ok(Verdict::fail(
                fwd.certificate,
                checked,
                Counterexample {
                    gamma: Isometry::identity(p.dimension),
                    eta: Isometry::identity(p.dimension),
                    radius: radius.clone(),
                    description: "forward rule does not reproduce the target window".into(),
                },
            ));
        }
        let w_p = base_window(flavor_of(p), p.dimension, radius);
        let expected_p = p.cut(&w_p)?;
        let produced_p = match apply_rule(&witness.backward, q, &w_p) {
            Ok(x) => x,
            Err(e) => {
                return Ok(Verdict::fail(
                    bwd.certificate,
                    checked,
                    Counterexample {
                        gamma: Isometry::identity(p.dimension),
                        eta: Isometry::identity(p.dimension),
                        radius: radius.clone(),
                        description: format!("backward rule application failed: {e}"),
                    },
                ))
            }
        };
        checked += 1;
        if produced_p != expected_p {
            return Ok(Verdict::fail(
                bwd.certificate,
                checked,
                Counterexample {
                    gamma: Isometry::identity(p.dimension),
                    eta: Isometry::identity(p.dimension),
                    radius: radius.clone(),
                    description: "backward rule does not reproduce the source window".into(),
                },
            ));
        }
    }
    Ok(Verdict::pass(fwd.certificate, checked))
}

/// Builds a two-sided witness directly from the pattern pair.
pub fn witness_between(
    p: &AbstractPattern,
    q: &AbstractPattern,
    forward_margin: &Q,
    backward_margin: &Q,
    forward_out: &Q,
    backward_out: &Q,
    test_radii: Vec<Q>,
) -> Result<MLDWitness> {
    let forward = rule_from_patterns(p, q, forward_margin, forward_margin, forward_out)?;
    let backward = rule_from_patterns(q, p, backward_margin, backward_margin, backward_out)?;
    Ok(MLDWitness {
        forward,
        backward,
        test_radii,
    })
}

/// Exact symmetry group data: the translation period lattice (periodic
/// patterns) and the finite stabilizer of the canonical base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryGroup {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation_lattice: Option<Lattice>,
    pub point_stabilizer: Vec<Isometry>,
}

impl SymmetryGroup {
    pub fn is_trivial(&self) -> bool {
        self.translation_lattice.is_none()
            && self.point_stabilizer.iter().all(Isometry::is_identity)
    }

    pub fn stabilizer_rotations(&self) -> Vec<PointGroupElement> {
        let mut out: Vec<PointGroupElement> = self
            .point_stabilizer
            .iter()
            .map(|g| g.rotation.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// All isometries in Gamma mapping finite pattern `a` onto finite pattern
/// `b`, found by matching the first anchor of `a` to anchors of `b` through
/// every point-group element.
pub fn isometries_mapping(
    a: &AbstractPattern,
    b: &AbstractPattern,
) -> Result<Vec<Isometry>> {
    if !a.is_finitely_supported() || !b.is_finitely_supported() {
        return Err(Error::UnboundedRequest(
            "isometry matching needs finite patterns".into(),
        ));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::Unsupported(
            "isometry matching is ill-posed for zero patterns".into(),
        ));
    }
    let anchors_a = a.motif_anchor_points();
    let anchors_b = b.motif_anchor_points();
    let x0 = anchors_a[0].clone();
    let mut out = Vec::new();
    for rot in &a.group.point_group {
        let r = Isometry::new(Point::origin(a.dimension), rot.clone());
        let rx0 = r.apply(&x0);
        for y in &anchors_b {
            let g = Isometry::translate(y.sub(&rx0)).compose(&r);
            if a.act(&g)? == *b {
                out.push(g);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Exact symmetry group within Gamma. Finite patterns get their full finite
/// stabilizer; periodic patterns get the maximal translation lattice plus the
/// stabilizer of the canonical base anchor.
pub fn symmetry_group(p: &AbstractPattern) -> Result<SymmetryGroup> {
    if p.is_zero() {
        return Err(Error::Unsupported(
            "the zero pattern is stabilized by the whole group".into(),
        ));
    }
    if p.is_finitely_supported() {
        return Ok(SymmetryGroup {
            translation_lattice: None,
            point_stabilizer: isometries_mapping(p, p)?,
        });
    }
    let Some(lattice) = p.period_lattice() else {
        return Err(Error::Unsupported(
            "symmetry of non-periodic infinite patterns is undecided".into(),
        ));
    };
    let anchors = p.motif_anchor_points();
    let x0 = anchors.first().cloned().unwrap_or_else(|| Point::origin(p.dimension));
    let mut stab = Vec::new();
    for rot in &p.group.point_group {
        // g = t_{x0} rot t_{-x0} fixes x0.
        let r = Isometry::new(Point::origin(p.dimension), rot.clone());
        let g = Isometry::translate(x0.clone())
            .compose(&r)
            .compose(&Isometry::translate(x0.neg()));
        if p.act(&g)? == *p {
            stab.push(g);
        }
    }
    stab.sort();
    stab.dedup();
    Ok(SymmetryGroup {
        translation_lattice: Some(lattice),
        point_stabilizer: stab,
    })
}

/// Stabilizer of `window_content` inside the isotropy group of x: the point
/// group elements conjugated to fix x that map the content to itself.
pub fn isotropy_stabilizer(
    content: &AbstractPattern,
    x: &Point,
) -> Result<Vec<Isometry>> {
    let mut out = Vec::new();
    for rot in &content.group.point_group {
        let r = Isometry::new(Point::origin(content.dimension), rot.clone());
        let g = Isometry::translate(x.clone())
            .compose(&r)
            .compose(&Isometry::translate(x.neg()));
        if content.act(&g)? == *content {
            out.push(g);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{checkerboard, PointSetPayload};
    use crate::pattern::AbstractPattern;

    fn pt1(n: i64, d: i64) -> Point {
        Point(vec![Q::ratio(n, d)])
    }

    fn z1() -> AbstractPattern {
        AbstractPattern::point_set(
            GroupSpec::translations(1),
            PointSetPayload::integer_lattice(1),
        )
    }

    #[test]
    fn window_equality_on_the_integer_lattice() {
        let p = z1();
        let w = Window::ball(pt1(0, 1), Q::from_int(10));
        assert!(window_equal(
            &p,
            &Isometry::translate(pt1(1, 1)),
            &Isometry::identity(1),
            &w
        )
        .unwrap());
        let w1 = Window::ball(pt1(0, 1), Q::one());
        assert!(!window_equal(
            &p,
            &Isometry::translate(pt1(1, 2)),
            &Isometry::identity(1),
            &w1
        )
        .unwrap());
    }

    #[test]
    fn checkerboard_window_equality_under_color_translation() {
        let board = AbstractPattern::labeled_patch(GroupSpec::translations(2), checkerboard(2));
        let w = Window::ball(Point::origin(2), Q::from_int(5));
        let diag = Isometry::translate(Point(vec![Q::one(), Q::one()]));
        assert!(window_equal(&board, &diag, &Isometry::identity(2), &w).unwrap());
        let step = Isometry::translate(Point(vec![Q::one(), Q::zero()]));
        assert!(!window_equal(&board, &step, &Isometry::identity(2), &w).unwrap());
    }

    #[test]
    fn coarsening_derives_but_refining_does_not() {
        let z = z1();
        let half = AbstractPattern::point_set(
            GroupSpec::translations(1),
            PointSetPayload::periodic(
                Lattice::from_generators(1, &[pt1(1, 2)]).unwrap(),
                vec![Point::origin(1)],
            ),
        );
        let radii = [Q::one(), Q::from_int(2), Q::from_int(4)];
        // The fine lattice determines the coarse one locally: (1/2)Z -> Z
        // fails because 0 and 1/2 have matching fine views but different
        // coarse views... actually (1/2)Z is invariant under 1/2-shifts while
        // Z is not, so derivation fails.
        let v = check_local_derivation(&half, &z, &Q::one(), &radii, &CandidateGen::Auto).unwrap();
        assert_eq!(v.status, VerdictStatus::Fail);
        // Z -> (1/2)Z holds: any two agreeing views of Z differ by an integer
        // shift, which also stabilizes (1/2)Z.
        let v = check_local_derivation(&z, &half, &Q::one(), &radii, &CandidateGen::Auto).unwrap();
        assert!(v.is_pass());
        assert_eq!(v.certificate, Certificate::PeriodExhaustive);
        // Derivation to the zero pattern is trivial.
        let v = check_local_derivation(&z, &z.zero_like(), &Q::one(), &radii, &CandidateGen::Auto)
            .unwrap();
        assert!(v.is_pass());
    }

    #[test]
    fn identity_style_rule_reproduces_the_pattern() {
        let z = z1();
        let rule = rule_from_patterns(&z, &z, &Q::zero(), &Q::zero(), &Q::one()).unwrap();
        let w = Window::ball(pt1(0, 1), Q::from_int(3));
        let applied = apply_rule(&rule, &z, &w).unwrap();
        assert_eq!(applied, z.cut(&w).unwrap());
    }

    #[test]
    fn symmetry_of_integer_lattice_and_fifth_shift() {
        let z = AbstractPattern::point_set(
            GroupSpec::with_minus_identity(1),
            PointSetPayload::integer_lattice(1),
        );
        let sym = symmetry_group(&z).unwrap();
        assert_eq!(
            sym.translation_lattice.unwrap(),
            Lattice::from_generators(1, &[pt1(1, 1)]).unwrap()
        );
        // Reflection about an integer fixes Z.
        assert_eq!(sym.point_stabilizer.len(), 2);

        let fifth = AbstractPattern::point_set(
            GroupSpec::translations(1),
            PointSetPayload::periodic(
                Lattice::from_generators(1, &[pt1(1, 1)]).unwrap(),
                vec![pt1(1, 5), pt1(-1, 5)],
            ),
        );
        let sym = symmetry_group(&fifth).unwrap();
        assert_eq!(
            sym.translation_lattice.unwrap(),
            Lattice::from_generators(1, &[pt1(1, 1)]).unwrap()
        );
    }

    #[test]
    fn finite_asymmetric_set_has_trivial_symmetry() {
        let f = AbstractPattern::point_set(
            GroupSpec::with_minus_identity(1),
            PointSetPayload::finite(vec![pt1(0, 1), pt1(2, 7), pt1(5, 7)]),
        );
        let sym = symmetry_group(&f).unwrap();
        assert!(sym.is_trivial());
        // A symmetric pair is stabilized by the reflection about its center.
        let pair = AbstractPattern::point_set(
            GroupSpec::with_minus_identity(1),
            PointSetPayload::finite(vec![pt1(0, 1), pt1(1, 1)]),
        );
        let sym = symmetry_group(&pair).unwrap();
        assert_eq!(sym.point_stabilizer.len(), 2);
    }
}
