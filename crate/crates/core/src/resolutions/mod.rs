//! Free and minimal resolutions, Ext dimensions and the invariants read
//! off from them.

mod ext;
mod free;
mod invariants;
mod series;
mod text;

pub use ext::{
    coboundary, cohomology_dims, evaluate_cochain, ext_dims, ext_dims_with, hom_complex,
    minimal_rank_identity_check, syzygy, CochainComplex,
};
pub use free::{
    default_resolution, free_resolution, free_resolution_with, lift_chain_map, translate,
    CosetChart, FreeMap, FreeResolution, GeneratorRule,
};
pub use invariants::{
    chouinard_projective, complexity, complexity_over_elementary, is_projective,
    krull_dimension_estimate, maximal_subgroup_projectivity, KrullEstimate, GROWTH_PROBE,
    PROJECTIVE_PROBE,
};
pub use series::{expand_rational, growth_rate, poincare_fit, render_poly, DimSeries, PoincareFit};
pub use text::{resolution_from_text, resolution_to_text};
