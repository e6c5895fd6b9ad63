//! The `tiltlab` command line: argument parsing, dispatch into
//! `tiltlab-core`, and JSON, text or SVG output.
//!
//! [`run`] is the whole program; `main` only forwards the process arguments
//! and exit code. Usage errors exit with 1, violated mathematical
//! preconditions with 2.

pub mod plot;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tiltlab_core::{
    best_c3_bound, bmt_expression, ch3_bound_in_case, ch3_case, classify_type, cm_regularity,
    cm_regularity_bound, extremal_ellipse, format_rational, hartshorne_bound,
    intersects_modified_type1, intersects_modified_type3, modified_intersection_type1,
    modified_intersection_type3, modified_wall_type1, modified_wall_type3, numerical_wall, orient,
    parse_rational, rank2_c3_bound, rat, scan, serre_bound, serre_bound_weak, stable_region_shift,
    stable_region_sheaf, twisted_invariants, vanishing_h1, vanishing_h1_bound,
    vanishing_top_minus_one, vanishing_top_minus_one_bound, ChernTriple, ClassifiedWall, Error,
    GeometryContext, HnFactor, ModifiedIntersection, P3Character, QuadValue, Rational,
    ScanRequest, Semicircle, SlopeBoundInput, SurfaceContext, SurfaceSheafData, TiltPoint,
    WallDescriptor, WallType, DEFAULT_GUARD,
};

use plot::{circle_caption, render_svg, Item, Scene};

/// Environment variable overriding the scan's lattice-point guard.
pub const GUARD_ENV: &str = "TILTLAB_GUARD";

#[derive(Debug, Parser)]
#[command(
    name = "tiltlab",
    version,
    about = "Exact tilt-stability computations: walls, stability regions, vanishing bounds"
)]
pub struct Cli {
    /// Dimension of the variety.
    #[arg(long, global = true, default_value_t = 3)]
    n: u32,
    /// Degree H^n of the polarization.
    #[arg(long, global = true, default_value = "1", value_parser = rational)]
    hn: Rational,
    /// Print human-readable text instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    /// Also write an SVG picture of the result to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    svg_out: Option<PathBuf>,
    /// Segments per semicircle or ellipse in SVG output.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(1..))]
    samples: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The numerical wall W(w, v) and its type.
    Wall(Pair),
    /// Type (1, 2 or 3) of the semicircular wall W(w, v).
    Type(Pair),
    /// The modification of a Type 1 or Type 3 wall.
    Modify(Pair),
    /// The extremal ellipse of v, optionally against the modified wall of w.
    Ellipse(EllipseArgs),
    /// Region where a slope-stable sheaf (or its shift) is tilt-stable.
    Region(RegionArgs),
    /// Effective vanishing bounds.
    Vanishing {
        #[command(subcommand)]
        which: Vanishing,
    },
    /// Effective Serre vanishing on a surface.
    Serre(FactorArgs),
    /// Castelnuovo-Mumford regularity bound on a surface.
    Regularity(FactorArgs),
    /// Chern class bounds on projective three-space.
    P3 {
        #[command(subcommand)]
        which: P3,
    },
    /// Candidate walls of v from a bounded lattice search.
    Scan(ScanArgs),
    /// SVG picture of walls, modifications, ellipse and region boundary.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
struct Pair {
    /// Character v as "e0,e1,e2[,e3]".
    #[arg(long, value_parser = character, allow_hyphen_values = true)]
    v: ChernTriple,
    /// Character w as "e0,e1,e2[,e3]".
    #[arg(long, value_parser = character, allow_hyphen_values = true)]
    w: ChernTriple,
}

#[derive(Debug, Args)]
struct EllipseArgs {
    #[arg(long, value_parser = character, allow_hyphen_values = true)]
    v: ChernTriple,
    /// Destabilizing character whose modified wall is tested against the ellipse.
    #[arg(long, value_parser = character, allow_hyphen_values = true)]
    w: Option<ChernTriple>,
    /// Point at which to evaluate the rank bound (needs --alpha-sq).
    #[arg(long, value_parser = rational, allow_hyphen_values = true, requires = "alpha_sq")]
    beta: Option<Rational>,
    #[arg(long, value_parser = rational, requires = "beta")]
    alpha_sq: Option<Rational>,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[arg(long, value_parser = character, allow_hyphen_values = true)]
    v: ChernTriple,
    /// Upper bound for slopes of subsheaves; defaults to Farey rounding of mu(v).
    #[arg(long, value_parser = rational, allow_hyphen_values = true, conflicts_with = "shift")]
    mu_max: Option<Rational>,
    /// Compute the region for the shift E[1] instead.
    #[arg(long)]
    shift: bool,
    /// Lower bound for slopes of quotients (with --shift).
    #[arg(long, value_parser = rational, allow_hyphen_values = true, requires = "shift")]
    mu_min: Option<Rational>,
}

#[derive(Debug, Subcommand)]
enum Vanishing {
    /// Smallest l with H^{n-1}(E(K + lH)) = 0.
    Top {
        #[arg(long, value_parser = character, allow_hyphen_values = true)]
        v: ChernTriple,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        mu_max: Option<Rational>,
    },
    /// Smallest l with H^1(E(-lH)) = 0.
    H1 {
        #[arg(long, value_parser = character, allow_hyphen_values = true)]
        v: ChernTriple,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        mu_min: Option<Rational>,
    },
}

#[derive(Debug, Args)]
struct FactorArgs {
    /// Harder-Narasimhan factor as "rank,muK,deltaK"; repeat in order.
    #[arg(long = "factor", value_parser = hn_factor, allow_hyphen_values = true)]
    factors: Vec<HnFactor>,
    /// Factor as raw data "rank,c1.H,c1.K,ch2"; repeat in order.
    #[arg(long = "sheaf", value_parser = sheaf_data, allow_hyphen_values = true, conflicts_with = "factors")]
    sheaves: Vec<SurfaceSheafData>,
    /// H.H of the surface (default: the projective plane).
    #[arg(long, value_parser = rational, default_value = "1")]
    hh: Rational,
    #[arg(long, value_parser = rational, default_value = "-3", allow_hyphen_values = true)]
    kh: Rational,
    #[arg(long, value_parser = rational, default_value = "9", allow_hyphen_values = true)]
    kk: Rational,
}

#[derive(Debug, Subcommand)]
enum P3 {
    /// c3 bounds for stable rank-two sheaves with c1 in {0, -1}.
    Rank2 {
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        c1: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        c2: Rational,
        /// The slope bound lies above the case threshold.
        #[arg(long)]
        mu_max_large: bool,
        /// The sheaf is reflexive, so Hartshorne's bound applies too.
        #[arg(long)]
        reflexive: bool,
    },
    /// Upper bound for ch3 of a slope-stable sheaf.
    Ch3 {
        #[arg(long)]
        rank: u64,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        c1: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        c2: Rational,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        mu_max: Option<Rational>,
    },
    /// The cubic inequality at one point of the half plane.
    Bmt {
        /// Character with ch3 component, "e0,e1,e2,e3".
        #[arg(long, value_parser = character, allow_hyphen_values = true)]
        v: ChernTriple,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        beta: Rational,
        #[arg(long, value_parser = rational)]
        alpha_sq: Rational,
    },
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_parser = character, allow_hyphen_values = true)]
    v: ChernTriple,
    /// Largest rank of a destabilizing character.
    #[arg(long)]
    rank_max: u64,
    /// Center window "lo,hi".
    #[arg(long, value_parser = window, allow_hyphen_values = true)]
    window: (Rational, Rational),
    /// Denominator of the e1 lattice.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    e1_den: u64,
    /// Denominator of the e2 lattice offset.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    e2_den: u64,
    /// Report how many lattice points each filter rejected.
    #[arg(long)]
    diagnostics: bool,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long, value_parser = character, allow_hyphen_values = true)]
    v: ChernTriple,
    /// Draw W(w, v); repeatable.
    #[arg(long = "w", value_parser = character, allow_hyphen_values = true)]
    ws: Vec<ChernTriple>,
    /// Also draw the modification of each Type 1 or Type 3 wall.
    #[arg(long)]
    modified: bool,
    /// Draw the extremal ellipse of v and its crossings with modified walls.
    #[arg(long)]
    ellipse: bool,
    /// Draw the boundary of the stability region for this slope bound.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    mu_max: Option<Rational>,
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|_| format!("{text:?} is not a rational number like 3, -2 or 5/7"))
}

fn character(text: &str) -> Result<ChernTriple, String> {
    ChernTriple::parse(text).map_err(|_| {
        format!("{text:?} is not a character; expected 3 or 4 comma-separated rationals \"e0,e1,e2[,e3]\"")
    })
}

fn rationals(text: &str, count: usize, shape: &str) -> Result<Vec<Rational>, String> {
    let parts = text
        .split(',')
        .map(rational)
        .collect::<Result<Vec<_>, _>>()?;
    if parts.len() != count {
        return Err(format!("{text:?} does not have the form \"{shape}\""));
    }
    Ok(parts)
}

fn window(text: &str) -> Result<(Rational, Rational), String> {
    let mut parts = rationals(text, 2, "lo,hi")?.into_iter();
    let lo = parts.next().expect("two parts");
    let hi = parts.next().expect("two parts");
    if lo > hi {
        return Err(format!("window {text:?} has lo > hi"));
    }
    Ok((lo, hi))
}

fn positive_rank(r: &Rational, text: &str) -> Result<u64, String> {
    if !r.is_integer() || *r < rat(1, 1) {
        return Err(format!("rank in {text:?} must be a positive integer"));
    }
    r.to_integer()
        .to_string()
        .parse()
        .map_err(|_| format!("rank in {text:?} is too large"))
}

fn hn_factor(text: &str) -> Result<HnFactor, String> {
    let p = rationals(text, 3, "rank,muK,deltaK")?;
    Ok(HnFactor {
        rank: positive_rank(&p[0], text)?,
        mu_k: p[1].clone(),
        delta_k: p[2].clone(),
    })
}

fn sheaf_data(text: &str) -> Result<SurfaceSheafData, String> {
    let p = rationals(text, 4, "rank,c1H,c1K,ch2")?;
    Ok(SurfaceSheafData {
        rank: positive_rank(&p[0], text)?,
        c1_h: p[1].clone(),
        c1_k: p[2].clone(),
        ch2: p[3].clone(),
    })
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

/// What a subcommand produced.
struct Report {
    json: Value,
    text: String,
    scene: Option<Scene>,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            scene: None,
        }
    }

    fn with_scene(mut self, scene: Scene) -> Self {
        self.scene = Some(scene);
        self
    }
}

/// A `QuadValue` for JSON: `"p/q"` when rational, `{"q","s","d"}` otherwise.
fn exact(x: &QuadValue) -> Value {
    match x.as_rational() {
        Some(r) => Value::String(format_rational(r)),
        None => serde_json::to_value(x).expect("QuadValue serializes"),
    }
}

fn integer(n: impl ToString) -> Value {
    let s = n.to_string();
    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
}

fn to_json<T: serde::Serialize>(value: &T) -> Outcome<Value> {
    serde_json::to_value(value).map_err(|e| Failure::Domain(format!("cannot encode result: {e}")))
}

fn context(cli: &Cli) -> Outcome<GeometryContext> {
    Ok(GeometryContext::new(cli.n, cli.hn.clone())?)
}

fn validated(ctx: &GeometryContext, chars: &[&ChernTriple]) -> Outcome<()> {
    for c in chars {
        c.validate(ctx)?;
    }
    Ok(())
}

/// Type of a semicircular wall, with the roles of `w` and `v` taken by
/// slope order.
fn oriented_type(w: &ChernTriple, v: &ChernTriple) -> Outcome<WallType> {
    let pair = orient(w, v)?;
    Ok(classify_type(&pair.lower, &pair.higher)?)
}

fn wall_item(w: &ChernTriple, wall: &WallDescriptor, wall_type: Option<WallType>) -> Option<Item> {
    match wall {
        WallDescriptor::Semicircle(c) => {
            let kind = wall_type.map(|t| format!(" type {}", t.number())).unwrap_or_default();
            Some(Item::Semicircle {
                circle: c.clone(),
                label: format!("W(w,v) w={w} {}{kind}", circle_caption(c)),
            })
        }
        WallDescriptor::VerticalLine { beta } => Some(Item::Vertical {
            beta: QuadValue::from(beta),
            label: format!("W(w,v) w={w} beta={}", format_rational(beta)),
        }),
        WallDescriptor::Empty => None,
    }
}

fn describe_wall(wall: &WallDescriptor) -> String {
    match wall {
        WallDescriptor::Semicircle(c) => format!(
            "semicircle center {} radius^2 {}",
            format_rational(&c.center),
            format_rational(&c.radius_sq)
        ),
        WallDescriptor::VerticalLine { beta } => {
            format!("vertical line beta = {}", format_rational(beta))
        }
        WallDescriptor::Empty => "empty".into(),
    }
}

fn circle_json(c: &Semicircle) -> Value {
    json!({
        "kind": "circle",
        "s": format_rational(&c.center),
        "rsq": format_rational(&c.radius_sq),
    })
}

fn cmd_wall(cli: &Cli, p: &Pair) -> Outcome<Report> {
    let ctx = context(cli)?;
    validated(&ctx, &[&p.v, &p.w])?;
    let wall = numerical_wall(&p.w, &p.v)?;
    let wall_type = match wall {
        WallDescriptor::Semicircle(_) => Some(oriented_type(&p.w, &p.v)?),
        _ => None,
    };
    let mut text = format!("W(w, v): {}", describe_wall(&wall));
    if let Some(t) = wall_type {
        text.push_str(&format!(", type {}", t.number()));
    }
    let mut scene = Scene::default();
    if let Some(item) = wall_item(&p.w, &wall, wall_type) {
        scene.push(item);
    }
    let json = to_json(&ClassifiedWall { wall, wall_type })?;
    Ok(Report::new(json, text).with_scene(scene))
}

fn cmd_type(cli: &Cli, p: &Pair) -> Outcome<Report> {
    let ctx = context(cli)?;
    validated(&ctx, &[&p.v, &p.w])?;
    if numerical_wall(&p.w, &p.v)?.as_semicircle().is_none() {
        return Err(Failure::Domain(
            "only semicircular walls have a type; W(w, v) is a vertical line or empty".into(),
        ));
    }
    let t = oriented_type(&p.w, &p.v)?;
    Ok(Report::new(json!({ "type": t.number() }), format!("type {}", t.number())))
}

fn cmd_modify(cli: &Cli, p: &Pair) -> Outcome<Report> {
    let ctx = context(cli)?;
    validated(&ctx, &[&p.v, &p.w])?;
    let wall = numerical_wall(&p.w, &p.v)?;
    let Some(circle) = wall.as_semicircle().cloned() else {
        return Err(Failure::Domain(
            "only semicircular walls can be modified; W(w, v) is a vertical line or empty".into(),
        ));
    };
    let pair = orient(&p.w, &p.v)?;
    let t = classify_type(&pair.lower, &pair.higher)?;
    let modified = match t {
        WallType::Type1 => modified_wall_type1(&pair.lower, &pair.higher)?,
        WallType::Type3 => modified_wall_type3(&pair.lower, &pair.higher)?,
        WallType::Type2 => {
            return Err(Failure::Domain(
                "a Type 2 wall has no modification; only Type 1 and Type 3 walls do".into(),
            ))
        }
    };
    let json = json!({
        "type": t.number(),
        "wall": circle_json(&circle),
        "modified": circle_json(&modified),
    });
    let text = format!(
        "type {} wall {}\nmodified {}",
        t.number(),
        circle_caption(&circle),
        circle_caption(&modified)
    );
    let mut scene = Scene::default();
    scene.push(Item::Semicircle {
        circle: circle.clone(),
        label: format!("W(w,v) {}", circle_caption(&circle)),
    });
    scene.push(Item::Semicircle {
        label: format!("modified wall {}", circle_caption(&modified)),
        circle: modified,
    });
    Ok(Report::new(json, text).with_scene(scene))
}

/// The modified wall of `w` against the ellipse of `v`: Type 1 when
/// `μ(w) < μ(v)`, otherwise the mirrored Type 3 statement.
fn ellipse_contact(
    v: &ChernTriple,
    w: &ChernTriple,
    ctx: &GeometryContext,
) -> Outcome<(ModifiedIntersection, bool)> {
    let pair = orient(w, v)?;
    if pair.swapped {
        Ok((
            modified_intersection_type3(v, w, ctx)?,
            intersects_modified_type3(v, w, ctx)?,
        ))
    } else {
        Ok((
            modified_intersection_type1(w, v, ctx)?,
            intersects_modified_type1(w, v, ctx)?,
        ))
    }
}

fn crossing_markers(m: &ModifiedIntersection, ellipse: &tiltlab_core::ExtremalEllipse) -> Vec<Item> {
    let zero = rat(0, 1);
    [&m.beta_minus, &m.beta_plus]
        .into_iter()
        .filter_map(|beta| {
            let alpha_sq = ellipse.alpha_sq_at(beta);
            (alpha_sq > zero).then(|| Item::Marker {
                label: format!(
                    "crossing beta={} alpha^2={}",
                    format_rational(beta),
                    format_rational(&alpha_sq)
                ),
                beta: beta.clone(),
                alpha_sq,
            })
        })
        .collect()
}

fn cmd_ellipse(cli: &Cli, a: &EllipseArgs) -> Outcome<Report> {
    let ctx = context(cli)?;
    validated(&ctx, &[&a.v])?;
    let e = extremal_ellipse(&a.v, &ctx)?;
    let (left, right) = e.intercepts();
    let mut json = to_json(&e)?;
    let mut text = format!(
        "ellipse v0*(beta - {mu})^2 + (v0 + hn)*alpha^2 = {rhs}, v0 = {v0}, hn = {hn}\nbeta-intercepts {left} and {right}",
        mu = format_rational(&e.mu),
        rhs = format_rational(&e.rhs),
        v0 = format_rational(&e.v0),
        hn = format_rational(&e.hn),
    );
    json["intercepts"] = json!([exact(&left), exact(&right)]);
    let mut scene = Scene::default();
    scene.push(Item::Ellipse {
        ellipse: e.clone(),
        label: format!(
            "extremal ellipse mu={} rhs={}",
            format_rational(&e.mu),
            format_rational(&e.rhs)
        ),
    });
    if let (Some(beta), Some(alpha_sq)) = (&a.beta, &a.alpha_sq) {
        let point = TiltPoint::new(beta.clone(), alpha_sq.clone())?;
        let holds = e.rank_bound_holds(&point);
        json["rank_bound_holds"] = json!(holds);
        text.push_str(&format!(
            "\nrank bound at ({}, {}): {}",
            format_rational(beta),
            format_rational(alpha_sq),
            if holds { "holds" } else { "fails" }
        ));
    }
    if let Some(w) = &a.w {
        validated(&ctx, &[w])?;
        let (m, strict) = ellipse_contact(&a.v, w, &ctx)?;
        json["intersection"] = json!({
            "modified": circle_json(&m.modified_wall),
            "beta_minus": format_rational(&m.beta_minus),
            "beta_plus": format_rational(&m.beta_plus),
            "alpha_sq_minus": format_rational(&e.alpha_sq_at(&m.beta_minus)),
            "alpha_sq_plus": format_rational(&e.alpha_sq_at(&m.beta_plus)),
            "contact": to_json(&m.contact)?,
            "intersects": strict,
        });
        text.push_str(&format!(
            "\nmodified wall {} meets the ellipse at beta = {} and {} ({})",
            circle_caption(&m.modified_wall),
            format_rational(&m.beta_minus),
            format_rational(&m.beta_plus),
            to_json(&m.contact)?.as_str().unwrap_or_default()
        ));
        scene.push(Item::Semicircle {
            circle: m.modified_wall.clone(),
            label: format!("modified wall {}", circle_caption(&m.modified_wall)),
        });
        scene.items.extend(crossing_markers(&m, &e));
    }
    Ok(Report::new(json, text).with_scene(scene))
}

fn bound_input(b: &Option<Rational>) -> SlopeBoundInput {
    match b {
        Some(m) => SlopeBoundInput::User(m.clone()),
        None => SlopeBoundInput::DefaultFarey,
    }
}

fn cmd_region(cli: &Cli, a: &RegionArgs) -> Outcome<Report> {
    let ctx = context(cli)?;
    validated(&ctx, &[&a.v])?;
    let cert = if a.shift {
        stable_region_shift(&a.v, &bound_input(&a.mu_min), &ctx)?
    } else {
        stable_region_sheaf(&a.v, &bound_input(&a.mu_max), &ctx)?
    };
    let who = if a.shift { "E[1]" } else { "E" };
    let beta = cert.region.beta();
    let shape = match cert.region.kind() {
        "left-strip" => format!("beta <= {beta}"),
        "vray" => format!("beta = {beta}"),
        "open-left" => format!("beta < {beta}"),
        _ => format!("beta >= {beta}"),
    };
    let mut text = format!(
        "{who} is tilt-stable for all alpha > 0 with {shape} ({}), given {}",
        cert.region.kind(),
        cert.conditional_on
    );
    for note in &cert.notes {
        text.push_str(&format!("\nnote: {note}"));
    }
    let mut scene = Scene::default();
    scene.push(Item::Vertical {
        label: format!("{who} stable region: {shape}"),
        beta,
    });
    Ok(Report::new(to_json(&cert)?, text).with_scene(scene))
}

fn cmd_vanishing(cli: &Cli, which: &Vanishing) -> Outcome<Report> {
    let ctx = context(cli)?;
    let (l, bound, what) = match which {
        Vanishing::Top { v, mu_max } => {
            validated(&ctx, &[v])?;
            let input = bound_input(mu_max);
            (
                vanishing_top_minus_one(v, &input, &ctx)?,
                vanishing_top_minus_one_bound(v, &input, &ctx)?,
                format!("H^{}(E(K + lH)) = 0", cli.n.saturating_sub(1)),
            )
        }
        Vanishing::H1 { v, mu_min } => {
            validated(&ctx, &[v])?;
            let input = bound_input(mu_min);
            (
                vanishing_h1(v, &input, &ctx)?,
                vanishing_h1_bound(v, &input, &ctx)?,
                "H^1(E(-lH)) = 0".to_string(),
            )
        }
    };
    let text = format!("{what} for every integer l > {bound}; smallest such l = {l}");
    Ok(Report::new(json!({ "min_l": integer(&l) }), text))
}

fn factors(a: &FactorArgs) -> Outcome<(Vec<HnFactor>, SurfaceContext)> {
    let ctx = SurfaceContext::new(a.hh.clone(), a.kh.clone(), a.kk.clone())?;
    let list = if a.sheaves.is_empty() {
        a.factors.clone()
    } else {
        a.sheaves
            .iter()
            .map(|s| twisted_invariants(s, &ctx))
            .collect::<Result<Vec<_>, _>>()?
    };
    if list.is_empty() {
        return Err(Failure::Usage(
            "give at least one --factor rank,muK,deltaK or --sheaf rank,c1H,c1K,ch2".into(),
        ));
    }
    Ok((list, ctx))
}

fn cmd_serre(a: &FactorArgs) -> Outcome<Report> {
    let (list, ctx) = factors(a)?;
    let strong = serre_bound(&list, &ctx)?;
    let weak = serre_bound_weak(&list, &ctx)?;
    let from = strong.next_integer_above();
    let json = json!({
        "bound": exact(&strong),
        "weak": exact(&weak),
        "vanishes_from": integer(&from),
    });
    let text = format!(
        "H^1(F(lH)) = 0 for every integer l > {strong} (simpler bound {weak}); first such l = {from}"
    );
    Ok(Report::new(json, text))
}

fn cmd_regularity(a: &FactorArgs) -> Outcome<Report> {
    let (list, ctx) = factors(a)?;
    let bound = cm_regularity_bound(&list, &ctx)?;
    let m = cm_regularity(&list, &ctx)?;
    let json = json!({ "bound": exact(&bound), "m": integer(&m) });
    let text = format!("F is m-regular for every integer m > {bound}; smallest such m = {m}");
    Ok(Report::new(json, text))
}

fn cmd_p3(which: &P3) -> Outcome<Report> {
    match which {
        P3::Rank2 {
            c1,
            c2,
            mu_max_large,
            reflexive,
        } => {
            let ours = rank2_c3_bound(c1, c2, *mu_max_large)?;
            let best = best_c3_bound(c1, c2, *mu_max_large, *reflexive)?;
            let mut json = json!({ "paper": exact(&ours) });
            let mut text = format!("c3 <= {ours}");
            if *reflexive {
                let h = hartshorne_bound(c1, c2)?;
                json["hartshorne"] = Value::String(format_rational(&h));
                text.push_str(&format!("\nHartshorne (reflexive): c3 <= {}", format_rational(&h)));
            }
            json["best"] = exact(&best);
            text.push_str(&format!("\nbest: c3 <= {best}"));
            Ok(Report::new(json, text))
        }
        P3::Ch3 { rank, c1, c2, mu_max } => {
            let p = P3Character::new(*rank, c1.clone(), c2.clone(), rat(0, 1))?;
            let (case, used) = ch3_case(&p, &bound_input(mu_max))?;
            let ch3 = ch3_bound_in_case(&p, case, &used)?;
            let c3 = p.c3_from_ch3(&ch3);
            let json = json!({
                "case": to_json(&case)?,
                "mu_max": format_rational(&used),
                "ch3": exact(&ch3),
                "c3": exact(&c3),
            });
            let text = format!(
                "ch3 <= {ch3} (c3 <= {c3}), {} case with mu-max = {}",
                to_json(&case)?.as_str().unwrap_or_default(),
                format_rational(&used)
            );
            Ok(Report::new(json, text))
        }
        P3::Bmt { v, beta, alpha_sq } => {
            let point = TiltPoint::new(beta.clone(), alpha_sq.clone())?;
            let value = bmt_expression(v, &point)?;
            let holds = value >= rat(0, 1);
            let json = json!({ "value": format_rational(&value), "holds": holds });
            let text = format!(
                "alpha^2*D + 4(e2)^2 - 6 e1 e3 = {} at beta = {}: {}",
                format_rational(&value),
                format_rational(beta),
                if holds { "holds" } else { "violated" }
            );
            Ok(Report::new(json, text))
        }
    }
}

fn guard() -> Outcome<u64> {
    match std::env::var(GUARD_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Failure::Usage(format!("{GUARD_ENV}={text:?} is not a nonnegative integer"))
        }),
        Err(_) => Ok(DEFAULT_GUARD),
    }
}

fn cmd_scan(cli: &Cli, a: &ScanArgs) -> Outcome<Report> {
    let ctx = context(cli)?;
    validated(&ctx, &[&a.v])?;
    let req = ScanRequest {
        v: a.v.clone(),
        ctx,
        rank_max: a.rank_max,
        e1_denominator: a.e1_den,
        e2_denominator: a.e2_den,
        window: a.window.clone(),
        guard: guard()?,
    };
    let report = scan(&req)?;
    let mut text = format!("{} candidate walls", report.walls.len());
    let mut scene = Scene::default();
    for c in &report.walls {
        text.push_str(&format!(
            "\nw = {}  {}  type {}",
            c.w,
            circle_caption(&c.wall),
            c.wall_type.number()
        ));
        scene.push(Item::Semicircle {
            circle: c.wall.clone(),
            label: format!("W(w,v) w={} {}", c.w, circle_caption(&c.wall)),
        });
    }
    let json = if a.diagnostics {
        let d = &report.diagnostics;
        text.push_str(&format!(
            "\nvisited {}, proportional {}, negative discriminant {}, negative quotient discriminant {}, vertical {}, empty {}, outside window {}, heart {}, type 2 {}, accepted {}",
            d.visited, d.proportional, d.negative_discriminant, d.negative_quotient_discriminant,
            d.vertical, d.empty, d.outside_window, d.heart, d.type2, d.accepted
        ));
        to_json(&report)?
    } else {
        to_json(&report.walls)?
    };
    Ok(Report::new(json, text).with_scene(scene))
}

fn plot_scene(cli: &Cli, a: &PlotArgs) -> Outcome<Scene> {
    let ctx = context(cli)?;
    validated(&ctx, &[&a.v])?;
    let mut scene = Scene::default();
    let ellipse = if a.ellipse {
        let e = extremal_ellipse(&a.v, &ctx)?;
        scene.push(Item::Ellipse {
            ellipse: e.clone(),
            label: format!(
                "extremal ellipse mu={} rhs={}",
                format_rational(&e.mu),
                format_rational(&e.rhs)
            ),
        });
        Some(e)
    } else {
        None
    };
    for w in &a.ws {
        validated(&ctx, &[w])?;
        let wall = numerical_wall(w, &a.v)?;
        let wall_type = match wall {
            WallDescriptor::Semicircle(_) => Some(oriented_type(w, &a.v)?),
            _ => None,
        };
        if let Some(item) = wall_item(w, &wall, wall_type) {
            scene.push(item);
        }
        if a.modified {
            let pair = orient(w, &a.v)?;
            let modified = match wall_type {
                Some(WallType::Type1) => Some(modified_wall_type1(&pair.lower, &pair.higher)?),
                Some(WallType::Type3) => Some(modified_wall_type3(&pair.lower, &pair.higher)?),
                _ => None,
            };
            if let Some(m) = modified {
                scene.push(Item::Semicircle {
                    label: format!("modified wall w={w} {}", circle_caption(&m)),
                    circle: m,
                });
            }
        }
        if let Some(e) = &ellipse {
            // Crossings only exist where the ellipse lemma's setup holds.
            if let Ok((m, _)) = ellipse_contact(&a.v, w, &ctx) {
                scene.items.extend(crossing_markers(&m, e));
            }
        }
    }
    if let Some(mu) = &a.mu_max {
        let cert = stable_region_sheaf(&a.v, &SlopeBoundInput::User(mu.clone()), &ctx)?;
        scene.push(Item::Vertical {
            label: format!(
                "stable region {} beta={} given {}",
                cert.region.kind(),
                cert.region.beta(),
                cert.conditional_on
            ),
            beta: cert.region.beta(),
        });
    }
    Ok(scene)
}

fn write_svg(path: &PathBuf, svg: &str) -> Outcome<()> {
    std::fs::write(path, svg)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn render(scene: &Scene, samples: u32) -> Outcome<String> {
    render_svg(scene, samples).ok_or_else(|| {
        Failure::Usage("nothing to draw: every requested wall is empty".into())
    })
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome<()> {
    if let Command::Plot(a) = &cli.command {
        if a.ws.is_empty() && !a.ellipse && a.mu_max.is_none() {
            return Err(Failure::Usage(
                "plot needs at least one of --w, --ellipse or --mu-max".into(),
            ));
        }
        let svg = render(&plot_scene(cli, a)?, cli.samples)?;
        return match &cli.svg_out {
            Some(path) => write_svg(path, &svg),
            None => emit(out, &svg),
        };
    }
    let report = match &cli.command {
        Command::Wall(p) => cmd_wall(cli, p)?,
        Command::Type(p) => cmd_type(cli, p)?,
        Command::Modify(p) => cmd_modify(cli, p)?,
        Command::Ellipse(a) => cmd_ellipse(cli, a)?,
        Command::Region(a) => cmd_region(cli, a)?,
        Command::Vanishing { which } => cmd_vanishing(cli, which)?,
        Command::Serre(a) => cmd_serre(a)?,
        Command::Regularity(a) => cmd_regularity(a)?,
        Command::P3 { which } => cmd_p3(which)?,
        Command::Scan(a) => cmd_scan(cli, a)?,
        Command::Plot(_) => unreachable!("handled above"),
    };
    if let Some(path) = &cli.svg_out {
        let scene = report.scene.as_ref().ok_or_else(|| {
            Failure::Usage("--svg-out: this subcommand has nothing to draw".into())
        })?;
        write_svg(path, &render(scene, cli.samples)?)?;
    }
    if cli.text {
        emit(out, &format!("{}\n", report.text))
    } else {
        emit(out, &format!("{}\n", report.json))
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

/// Runs one invocation. `args` includes the program name. Returns the exit
/// code: 0 on success, 1 on usage errors, 2 on domain errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    1
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
