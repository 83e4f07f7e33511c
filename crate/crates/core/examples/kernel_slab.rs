//! The weighted-sum kernel slab: heights from several places cancel.
//!
//! Each place contributes a tree with its degree weight; the slab
//! `|sum_p w_p h_p| <= width` is the finite model of the level set of the
//! invariant height. Its reduced homology vanishes through degree |S|-2
//! once the windows leave room for descents to be compensated.
//!
//! Run with: cargo run --example kernel_slab

use horotree::complex::kernel_slab_connectivity;
use horotree::rat::ratio;
use horotree::root_data::{build_root_system, PlaceSpec, TypeLetter};

fn main() {
    let rs = build_root_system(TypeLetter::A, 1).unwrap();

    for s in [2usize, 3] {
        let places: Vec<_> = (0..s).map(|i| PlaceSpec::unit(i, 2)).collect();
        let halfwidth = if s == 2 { 2 } else { 1 };
        let h = kernel_slab_connectivity(&rs, &places, ratio(1, 2), halfwidth).unwrap();
        println!(
            "|S| = {s}, unit degrees, width 1/2, halfwidth {halfwidth}: betti {:?}",
            h.betti
        );
        println!(
            "  vanishing through degree {}: {} (finite horizon: {})",
            s - 2,
            h.vanishing_through(s - 2),
            h.boundary_contact
        );
        assert!(h.vanishing_through(s - 2));
    }

    // degrees (1, 2): the second tree is (4+1)-regular and twice as steep
    let places = vec![
        PlaceSpec::new("p1", 1, 2).unwrap(),
        PlaceSpec::new("p2", 2, 2).unwrap(),
    ];
    let h = kernel_slab_connectivity(&rs, &places, ratio(1, 2), 2).unwrap();
    println!(
        "degrees (1,2): betti {:?}, connected: {}",
        h.betti,
        h.vanishing_through(0)
    );
    assert!(h.vanishing_through(0));
}
