use std::fmt::Write as _;

use clab_core::junior::{amp_restriction_surjective, build_containing_triangulation, regularity_certificate, Regularity, E3};
use clab_core::quiver::{moduli_fan_detailed, non_generic_witness};
use clab_core::surface::{enumerate_admissible_resolutions, is_quotient_smooth, maximal_resolution, minimal_resolution};
use clab_core::theta::{sample_generic, verify_main_theorem};
use clab_core::{
    build_junior, build_mckay_quiver, AbelianAction, BoundaryDivisor, Error, FixedConstellation, McKayQuiver, RatVec2,
    RatVec3, RealizationReport, Resolution, Theta, Triangulation,
};
use serde::Serialize;

use crate::config::{Command, RunConfig, Selector, SCHEMA};
use crate::draw::Drawing;

/// Failure of a run, split by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidAction(_)
            | Error::InvalidTheta(_)
            | Error::NonGeneric { .. }
            | Error::InvalidResolution(_)
            | Error::NotDominated(_)
            | Error::NotInLattice(_)
            | Error::TooLarge { .. }
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

pub struct Outcome {
    pub json: String,
    pub text: String,
    pub drawing: Option<Drawing>,
    /// False when an audit or certificate fails.
    pub passed: bool,
}

#[derive(Serialize)]
struct Document<'a, T> {
    schema: u32,
    config: &'a RunConfig,
    result: &'a T,
}

fn document<T: Serialize>(config: &RunConfig, result: &T) -> String {
    let doc = Document { schema: SCHEMA, config, result };
    let mut json = serde_json::to_string_pretty(&doc).expect("reports serialize");
    json.push('\n');
    json
}

#[derive(Serialize)]
struct GroupFacts {
    n: u32,
    order: usize,
    small: bool,
    boundary_divisor: String,
}

impl GroupFacts {
    fn of(action: &AbelianAction) -> Self {
        GroupFacts {
            n: action.n(),
            order: action.order(),
            small: action.is_small(),
            boundary_divisor: action.boundary_divisor().to_string(),
        }
    }

    fn text(&self) -> String {
        format!("|G| = {}, small = {}, B = {}\n", self.order, self.small, self.boundary_divisor)
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, Failure> {
    let action = config.action().map_err(Failure::Usage)?;
    match config.command {
        Command::Group => group(config, &action),
        Command::Minres => single_resolution(config, &action, "minimal", minimal_resolution(&action.n2())),
        Command::Maxres => single_resolution(config, &action, "maximal", maximal_resolution(&action.n2())),
        Command::Resolutions => resolutions(config, &action),
        Command::Triangulate { resolution } => triangulate(config, &action, resolution),
        Command::Moduli => moduli(config, &action),
        Command::Verify => verify(config, &action),
    }
}

#[derive(Serialize)]
struct GroupReport {
    n: u32,
    gens: Vec<[u32; 2]>,
    order: usize,
    exponent: u32,
    elements: Vec<[u32; 2]>,
    small: bool,
    special_linear: bool,
    boundary: BoundaryDivisor,
    boundary_divisor: String,
    quotient_smooth: bool,
    n2_basis: [RatVec2; 2],
    e1_prime: RatVec2,
    e2_prime: RatVec2,
    junior_points: usize,
}

fn group(config: &RunConfig, action: &AbelianAction) -> Result<Outcome, Failure> {
    let n2 = action.n2();
    let report = GroupReport {
        n: action.n(),
        gens: action.gens().to_vec(),
        order: action.order(),
        exponent: action.exponent(),
        elements: action.elements().to_vec(),
        small: action.is_small(),
        special_linear: action.is_special_linear(),
        boundary: action.boundary_divisor(),
        boundary_divisor: action.boundary_divisor().to_string(),
        quotient_smooth: is_quotient_smooth(&n2),
        n2_basis: n2.basis().clone(),
        e1_prime: n2.primitive(&RatVec2::unit(0))?,
        e2_prime: n2.primitive(&RatVec2::unit(1))?,
        junior_points: build_junior(action).points().len(),
    };
    let mut text = String::new();
    let _ = writeln!(text, "group of order {} and exponent {}", report.order, report.exponent);
    let _ = writeln!(text, "small = {}", report.small);
    let _ = writeln!(text, "special linear = {}", report.special_linear);
    let _ = writeln!(text, "B = {}", report.boundary_divisor);
    let _ = writeln!(text, "quotient smooth = {}", report.quotient_smooth);
    let _ = writeln!(text, "N2 basis = {}, {}", report.n2_basis[0], report.n2_basis[1]);
    let _ = writeln!(text, "e1' = {}, e2' = {}", report.e1_prime, report.e2_prime);
    let q = build_mckay_quiver(action);
    Ok(Outcome {
        json: document(config, &report),
        text,
        drawing: Some(Drawing::Quiver { title: title(action, "McKay quiver"), arrows: q.arrows() }),
        passed: true,
    })
}

fn title(action: &AbelianAction, what: &str) -> String {
    let gens: Vec<String> = action.gens().iter().map(|g| format!("({},{})", g[0], g[1])).collect();
    format!("{what} of 1/{} {}", action.n(), gens.join(" "))
}

fn resolution_text(name: &str, y: &Resolution) -> String {
    let mut text = format!("{name} resolution: {} exceptional rays\n", y.exceptional().len());
    for (v, a) in y.exceptional().iter().zip(y.discrepancies()) {
        let _ = writeln!(text, "  {v}  discrepancy {a}");
    }
    text
}

fn fan_drawing(action: &AbelianAction, what: &str, y: &Resolution) -> Drawing {
    Drawing::Fan { title: title(action, what), lattice: action.n2(), rays: y.rays().to_vec() }
}

#[derive(Serialize)]
struct ResolutionReport<'a> {
    group: GroupFacts,
    kind: &'a str,
    exceptional_count: usize,
    resolution: &'a Resolution,
}

fn single_resolution(config: &RunConfig, action: &AbelianAction, kind: &str, y: Resolution) -> Result<Outcome, Failure> {
    let report = ResolutionReport { group: GroupFacts::of(action), kind, exceptional_count: y.exceptional().len(), resolution: &y };
    Ok(Outcome {
        json: document(config, &report),
        text: report.group.text() + &resolution_text(kind, &y),
        drawing: Some(fan_drawing(action, &format!("{kind} resolution"), &y)),
        passed: true,
    })
}

#[derive(Serialize)]
struct ResolutionsReport {
    group: GroupFacts,
    minimal: Resolution,
    maximal: Resolution,
    count: usize,
    admissible: Vec<Resolution>,
}

fn resolutions(config: &RunConfig, action: &AbelianAction) -> Result<Outcome, Failure> {
    let n2 = action.n2();
    let admissible = enumerate_admissible_resolutions(&n2)?;
    let report = ResolutionsReport {
        group: GroupFacts::of(action),
        minimal: minimal_resolution(&n2),
        maximal: maximal_resolution(&n2),
        count: admissible.len(),
        admissible,
    };
    let mut text = report.group.text();
    text += &resolution_text("minimal", &report.minimal);
    text += &resolution_text("maximal", &report.maximal);
    let _ = writeln!(text, "{} resolutions dominated by the maximal one", report.count);
    for (i, y) in report.admissible.iter().enumerate() {
        let rays: Vec<String> = y.exceptional().iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "  [{i}] {}", rays.join(" "));
    }
    Ok(Outcome {
        json: document(config, &report),
        text,
        drawing: Some(fan_drawing(action, "maximal resolution", &report.maximal)),
        passed: true,
    })
}

#[derive(Serialize)]
struct TriangulationReport<'a> {
    group: GroupFacts,
    selector: Selector,
    resolution: &'a Resolution,
    triangle_count: usize,
    basic: bool,
    regular: bool,
    regularity: &'a Regularity,
    contains_resolution: bool,
    e3_neighbours: Vec<RatVec3>,
    amp_restriction_surjective: bool,
    triangulation: &'a Triangulation,
}

fn triangulate(config: &RunConfig, action: &AbelianAction, selector: Selector) -> Result<Outcome, Failure> {
    let n2 = action.n2();
    let y = match selector {
        Selector::Min => minimal_resolution(&n2),
        Selector::Max => maximal_resolution(&n2),
        Selector::Index(i) => {
            let all = enumerate_admissible_resolutions(&n2)?;
            let count = all.len();
            all.into_iter().nth(i).ok_or_else(|| {
                Failure::Usage(format!("resolution index {i} out of range: {count} admissible resolutions"))
            })?
        }
    };
    let junior = build_junior(action);
    let tri = build_containing_triangulation(&junior, &y)?;
    let regularity = regularity_certificate(&tri);
    let report = TriangulationReport {
        group: GroupFacts::of(action),
        selector,
        resolution: &y,
        triangle_count: tri.triangles().len(),
        basic: tri.is_basic(),
        regular: regularity.is_regular(),
        regularity: &regularity,
        contains_resolution: tri.contains_resolution(&junior, &y)?,
        e3_neighbours: tri.neighbours(E3).into_iter().map(|i| tri.points()[i].clone()).collect(),
        amp_restriction_surjective: amp_restriction_surjective(&tri, action)?,
        triangulation: &tri,
    };
    let passed = report.basic && report.regular && report.contains_resolution && report.amp_restriction_surjective;
    let mut text = report.group.text();
    text += &resolution_text(&format!("selected ({selector})"), &y);
    let _ = writeln!(text, "{} triangles on {} lattice points", report.triangle_count, tri.points().len());
    let _ = writeln!(text, "basic = {}", report.basic);
    let _ = writeln!(text, "regular = {}", report.regular);
    let _ = writeln!(text, "contains resolution = {}", report.contains_resolution);
    let _ = writeln!(text, "amp restriction surjective = {}", report.amp_restriction_surjective);
    let neighbours: Vec<String> = report.e3_neighbours.iter().map(ToString::to_string).collect();
    let _ = writeln!(text, "neighbours of e3: {}", neighbours.join(" "));
    let drawing = Drawing::Triangulation {
        title: title(action, "crepant triangulation"),
        points: tri.points().to_vec(),
        triangles: tri.triangles().to_vec(),
        highlight: tri.neighbours(E3).into_iter().collect(),
    };
    Ok(Outcome { json: document(config, &report), text, drawing: Some(drawing), passed })
}

#[derive(Serialize)]
struct FixedPoint {
    support: FixedConstellation,
    arrows: Vec<String>,
    cone: [RatVec2; 2],
}

#[derive(Serialize)]
struct ModuliReport {
    group: GroupFacts,
    theta: Theta,
    theta_source: &'static str,
    generic: bool,
    fixed_point_count: usize,
    fixed_points: Vec<FixedPoint>,
    fan: Resolution,
    contained_in_delta_prime: bool,
}

fn arrow_name(q: &McKayQuiver, a: usize) -> String {
    let var = if a % 2 == 0 { "x" } else { "y" };
    format!("{var}:{}->{}", q.tail(a), q.head(a))
}

fn moduli(config: &RunConfig, action: &AbelianAction) -> Result<Outcome, Failure> {
    let q = build_mckay_quiver(action);
    let (theta, theta_source) = match &config.theta {
        Some(t) => (t.clone(), "given"),
        None => (sample_generic(action, config.seed)?, "sampled"),
    };
    if theta.len() != q.order() {
        return Err(Failure::Usage(format!("theta has {} entries but |G| = {}", theta.len(), q.order())));
    }
    if let Some(subset) = non_generic_witness(&theta)? {
        return Err(Failure::Usage(format!("theta {theta} is not generic: it vanishes on the characters {subset:?}")));
    }
    let fan = moduli_fan_detailed(&q, &theta)?;
    let fixed_points: Vec<FixedPoint> = fan
        .cones
        .iter()
        .map(|(s, c)| FixedPoint {
            support: s.clone(),
            arrows: s.arrows.iter().map(|&a| arrow_name(&q, a)).collect(),
            cone: [c.start.clone(), c.end.clone()],
        })
        .collect();
    let report = ModuliReport {
        group: GroupFacts::of(action),
        theta,
        theta_source,
        generic: true,
        fixed_point_count: fixed_points.len(),
        fixed_points,
        contained_in_delta_prime: fan.resolution.is_dominated_by_max(),
        fan: fan.resolution,
    };
    let mut text = report.group.text();
    let _ = writeln!(text, "theta = {} ({})", report.theta, report.theta_source);
    text += &resolution_text("moduli", &report.fan);
    let _ = writeln!(text, "{} torus-fixed points", report.fixed_point_count);
    for p in &report.fixed_points {
        let _ = writeln!(text, "  cone {} {}: {}", p.cone[0], p.cone[1], p.arrows.join(" "));
    }
    let verdict = if report.contained_in_delta_prime { "pass" } else { "FAIL" };
    let _ = writeln!(text, "containment in the maximal resolution: {verdict}");
    Ok(Outcome {
        json: document(config, &report),
        text,
        drawing: Some(fan_drawing(action, "moduli fan", &report.fan)),
        passed: report.contained_in_delta_prime,
    })
}

fn verify(config: &RunConfig, action: &AbelianAction) -> Result<Outcome, Failure> {
    let report: RealizationReport = verify_main_theorem(action, config.samples, config.budget, config.seed)?;
    let mut text = GroupFacts::of(action).text();
    let only_if = &report.only_if;
    let _ = writeln!(
        text,
        "{} generic samples, {} distinct fans, {} containment violations",
        only_if.samples,
        only_if.distinct_fans.len(),
        only_if.violations.len()
    );
    let chambers = &report.chamber_constancy;
    let _ = writeln!(
        text,
        "{} chambers, {} same-chamber pairs, {} mismatches",
        chambers.chambers,
        chambers.pairs_checked,
        chambers.mismatches.len()
    );
    let _ = writeln!(text, "realized {}/{} admissible resolutions", report.realized_count(), report.realizations.len());
    for entry in &report.realizations {
        let rays: Vec<String> = entry.resolution.exceptional().iter().map(ToString::to_string).collect();
        let found = match &entry.realization.theta {
            Some(t) => format!("theta = {t} after {} draws", entry.realization.draws),
            None => format!("not realized in {} draws", entry.realization.draws),
        };
        let _ = writeln!(text, "  [{}] {found}", rays.join(" "));
    }
    let _ = writeln!(text, "verdict: {}", if report.verdict.passed { "pass" } else { "FAIL" });
    Ok(Outcome { json: document(config, &report), text, drawing: None, passed: report.verdict.passed })
}
