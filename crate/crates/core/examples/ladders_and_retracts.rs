//! Directed systems of nested slabs, essential triviality, and retract
//! transfer of nontrivial classes.
//!
//! Run with: cargo run --example ladders_and_retracts

use horotree::complex::{
    build_ladder, essential_triviality, retract_transfer, Constraint, DirectedSystem,
    RetractDiagram,
};
use horotree::rat::{rat, ratio};
use horotree::trees::{build_truncation, HVertex, TreeParams};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn main() {
    // synthetic ladders first: identity maps never die, alternating zero
    // maps die immediately
    let one = vec![vec![BigInt::one()]];
    let zero = vec![vec![BigInt::zero()]];
    let identity_ladder =
        DirectedSystem::from_matrices(1, vec![1, 1, 1], vec![one.clone(), one.clone()]).unwrap();
    let rep = essential_triviality(&identity_ladder);
    println!(
        "identity ladder on Z: essentially trivial = {}",
        rep.essentially_trivial
    );

    let alternating =
        DirectedSystem::from_matrices(1, vec![1, 1, 1, 1], vec![zero.clone(), one, zero]).unwrap();
    let rep2 = essential_triviality(&alternating);
    println!(
        "alternating-zero ladder: essentially trivial = {} (horizons {:?})",
        rep2.essentially_trivial, rep2.first_trivializing
    );

    // the tree-product ladder: classes survive every recorded inclusion
    let params = TreeParams::new(2, "t").unwrap();
    let tree = build_truncation(&params, (0, 6), &HVertex::apartment(0)).unwrap();
    let trees = vec![tree.clone(), tree.clone()];
    let ladder = build_ladder(
        &trees,
        &[
            Constraint::interval(rat(2), rat(3)),
            Constraint::interval(ratio(3, 2), rat(3)),
            Constraint::interval(rat(1), rat(3)),
        ],
        2,
        false,
    )
    .unwrap();
    println!(
        "\nnested-interval ladder: stage free ranks {:?}",
        ladder
            .stage_ranks
            .iter()
            .map(|(r, _)| *r)
            .collect::<Vec<_>>()
    );
    let rep3 = essential_triviality(&ladder);
    println!(
        "essentially trivial = {} at horizon {}",
        rep3.essentially_trivial, rep3.horizon
    );
    assert!(!rep3.essentially_trivial);

    // retract transfer: collapse a height-neutral extra factor; nonzero
    // classes downstairs force nonzero classes upstairs
    let flat = TreeParams::new(2, "flat").unwrap().with_weight(rat(0));
    let extra = build_truncation(&flat, (0, 1), &HVertex::apartment(0)).unwrap();
    let diagram = RetractDiagram::product_collapse(
        &trees,
        &extra,
        2,
        (
            Constraint::interval(rat(2), rat(3)),
            Constraint::interval(rat(1), rat(3)),
        ),
        2,
        [HVertex::apartment(0), HVertex::apartment(0)],
    )
    .unwrap();
    let report = retract_transfer(&diagram).unwrap();
    println!(
        "\nretract transfer: commutes={} retract_identity={} small_nonzero={} big_nonzero={} transfer={}",
        report.commutes,
        report.retract_identity,
        report.small_vertical_nonzero,
        report.big_vertical_nonzero,
        report.transfer_holds
    );
    assert!(report.transfer_holds);

    // a deliberately broken section is rejected with the offending cell
    let broken = RetractDiagram::product_collapse(
        &trees,
        &extra,
        2,
        (
            Constraint::interval(rat(2), rat(3)),
            Constraint::interval(rat(1), rat(3)),
        ),
        2,
        [HVertex::apartment(0), HVertex::apartment(1)],
    )
    .unwrap();
    match retract_transfer(&broken) {
        Err(e) => println!("broken section rejected: {e}"),
        Ok(_) => unreachable!("stage-dependent sections cannot commute"),
    }
}
