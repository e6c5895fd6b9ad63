//! Exact computations for tilt stability of sheaves on smooth projective
//! varieties: numerical walls, extremal ellipses, stability regions for
//! slope-stable sheaves, and the vanishing and Chern-class bounds that follow.
//!
//! Every quantity is an exact rational or a value `q + s√d`; no floating
//! point is involved in any decision.
//!
//! ```
//! use tiltlab_core::{numerical_wall, rat, int, ChernTriple, WallDescriptor};
//!
//! let v = ChernTriple::new(int(1), int(0), int(-1));
//! let w = ChernTriple::new(int(1), int(-1), rat(1, 2));
//! let wall = numerical_wall(&w, &v).unwrap();
//! let circle = wall.as_semicircle().unwrap();
//! assert_eq!(circle.center, rat(-3, 2));
//! assert_eq!(circle.radius_sq, rat(1, 4));
//! ```

pub mod chern;
pub mod ellipse;
pub mod error;
pub mod exactnum;
pub mod p3;
pub mod stability;
pub mod vanishing;
pub mod walls;
pub mod wallscan;

pub use chern::{poly_slope_cmp, ChernTriple, ExtendedSlope, GeometryContext, HeartSide, TiltPoint};
pub use ellipse::{
    extremal_ellipse, intersection_betas, intersects_modified_type1, intersects_modified_type3,
    modified_intersection_type1, modified_intersection_type3, rank_bound_holds, Contact,
    ExtremalEllipse, ModifiedIntersection,
};
pub use error::{Error, Result};
pub use exactnum::{format_rational, int, parse_rational, rat, ExactError, QuadValue, Rational};
pub use p3::{
    best_c3_bound, bmt_expression, bmt_holds, ch3_bound_in_case, ch3_case, ch3_upper_bound,
    hartshorne_bound, rank2_c3_bound, Ch3Case, P3Character,
};
pub use stability::{
    default_mu_max, region_contains, stable_region_shift, stable_region_sheaf, RegionCertificate,
    SlopeBoundInput, StabilityRegion,
};
pub use vanishing::{
    cm_regularity, cm_regularity_bound, farey_floor, serre_bound, serre_bound_weak, serre_terms,
    twisted_invariants, vanishing_h1, vanishing_h1_bound, vanishing_top_minus_one,
    vanishing_top_minus_one_bound, HnFactor, SurfaceContext, SurfaceSheafData,
};
pub use walls::{
    classify_type, modified_wall_type1, modified_wall_type3, nesting_compare, numerical_wall,
    orient, point_position, slope_order_at, AnchoredWall, ClassifiedWall, Nesting, OrientedPair,
    PointPosition, Semicircle, WallDescriptor, WallType,
};
pub use wallscan::{
    enumerate_candidate_walls, scan, CandidateWall, ScanDiagnostics, ScanReport, ScanRequest,
    DEFAULT_GUARD,
};
