//! Instrumented system generation for the kappa deck (diagnostics only).

#[path = "common/kappa_deck.rs"]
mod kappa_deck;

use qdual_core::bialgebra::dualize;
use qdual_core::coproduct::{derive_coproduct, find_recipes};
use qdual_core::grouprep::{adjoint_rep, build_group_element};
use qdual_core::plsolver::{build_function_set, impose_homomorphism};
use qdual_core::{Context, CoordId, ParamId};

#[test]
#[ignore]
fn kappa_system_stats() {
    let _c = Context::new(
        &["z"],
        &["P0", "P1", "P2", "P3", "K1", "K2", "K3", "J1", "J2", "J3"],
    )
    .unwrap();
    let coords: Vec<CoordId> = (0..10).map(CoordId).collect();
    let b = kappa_deck::kappa_bialgebra();
    let dual = dualize(&b).unwrap();
    let rep = adjoint_rep(&dual.algebra.c).unwrap();
    let g = build_group_element(&rep, &(0..10).collect::<Vec<_>>(), &coords, &[ParamId(0)]).unwrap();
    let recipes = find_recipes(&g, &coords).unwrap();
    let map = derive_coproduct(&g, &recipes, &coords).unwrap();
    let fset = build_function_set(&g, &map, &coords);
    eprintln!("function set size {}", fset.size());
    let sys = impose_homomorphism(&fset, &map, &coords).unwrap();
    eprintln!(
        "unknowns {} family {} stats {:?}",
        sys.indexer.unknown_count(),
        sys.family.dimension(),
        sys.stats
    );
}
