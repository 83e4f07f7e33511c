//! Witness spheres: the norm-r cycle in a product of ascending-ray pairs.
//!
//! Each factor contributes a line (two rays splitting at a base vertex);
//! the product carries the height difference as a norm, and the sphere of
//! radius r is an (m-1)-cycle in the level-set complex. Flowing downhill
//! shrinks the sphere; the chain identity is exact.
//!
//! Run with: cargo run --example witness_spheres

use horotree::complex::{
    build_slab_family, build_slab_relaxed, witness_class_in_slab, witness_shrink_chain,
    witness_sphere, Constraint,
};
use horotree::rat::rat;
use horotree::trees::{build_truncation, HVertex, TreeParams};

fn main() {
    let params = TreeParams::new(2, "t").unwrap();
    let tree = build_truncation(&params, (0, 6), &HVertex::apartment(0)).unwrap();
    let trees = vec![tree.clone(), tree.clone()];
    let base = [HVertex::apartment(0), HVertex::apartment(0)];

    // radius 2: the diamond through the lattice points (+-2,0),(+-1,+-1),(0,+-2)
    let w2 = witness_sphere(&trees, &base, rat(2)).unwrap();
    println!(
        "m=2 radius 2: {} oriented subdivision edges at level {}",
        w2.cycle.len(),
        horotree::rat::format_rat(&w2.level)
    );
    let level2 = build_slab_relaxed(&trees, Constraint::level(rat(2))).unwrap();
    println!(
        "  nonzero cycle in the level set: {}",
        w2.verify_nontrivial(&level2).unwrap()
    );

    // the class survives inside the interval slab [1,3]; the family is
    // built with the sphere level among the slicing levels so the cycle's
    // cells exist verbatim in the larger complex
    let fam = build_slab_family(
        &trees,
        &[
            Constraint::interval(rat(1), rat(3)),
            Constraint::level(rat(2)),
        ],
        2,
        false,
    )
    .unwrap();
    let class = witness_class_in_slab(&w2, &fam[0]).unwrap();
    println!(
        "  class in T[1,3] nonzero: {} (free coords {:?})",
        class.nonzero, class.free
    );

    // downhill shrink: radius 2 minus the annulus boundary equals radius 1
    let w1 = witness_sphere(&trees, &base, rat(1)).unwrap();
    let shrunk = witness_shrink_chain(&trees, &w2, rat(1)).unwrap();
    println!(
        "  shrink by 1: {} edges, equals the radius-1 witness: {}",
        shrunk.len(),
        shrunk == w1.cycle
    );
    assert_eq!(shrunk, w1.cycle);

    // three factors: the boundary of an octahedron
    let t3 = build_truncation(&params, (0, 3), &HVertex::apartment(0)).unwrap();
    let trees3 = vec![t3.clone(), t3.clone(), t3.clone()];
    let base3 = [
        HVertex::apartment(0),
        HVertex::apartment(0),
        HVertex::apartment(0),
    ];
    let w3 = witness_sphere(&trees3, &base3, rat(1)).unwrap();
    let level3 = build_slab_relaxed(&trees3, Constraint::level(rat(1))).unwrap();
    println!(
        "m=3 radius 1: {} oriented triangles, nonzero 2-cycle: {}",
        w3.cycle.len(),
        w3.verify_nontrivial(&level3).unwrap()
    );
}
