//! Rank-1 root groups on the digit model: fixed chamber sets, directed
//! enumerations, chamber coverage, and sheet sequences.
//!
//! Run with: cargo run --example root_group_enumeration

use horotree::moufang::{
    extend_directed_enumeration, fixed_chamber_set, fixed_chambers_by_action, root_group,
    sheet_sequence_check, verify_covering, verify_directedness, ApartmentLike, ChamberRay,
    Enumeration, HalfApartment, ResidueAlphabet, Word,
};
use horotree::trees::{build_truncation, HVertex, TreeParams};

fn main() {
    let q = 2u32;
    let alphabet = ResidueAlphabet::new(q).unwrap();

    // a root group fixes its half apartment and acts simply transitively
    // on the chambers across the boundary panel
    let group = root_group(HalfApartment::down(0), q).unwrap();
    let opposite = HVertex::new(1, vec![1]);
    println!(
        "root group at the level-0 panel: {} elements; nontrivial one maps branch 1 to {:?}",
        group.len(),
        group[1].apply(&opposite).unwrap().digits
    );

    // the fixed chamber set of a word is the down-ray at its lowest
    // nontrivial position; the action computes the same set
    let word = Word::factor(q, -1, 1)
        .unwrap()
        .compose(&Word::factor(q, 2, 1).unwrap(), &alphabet);
    let formula = fixed_chamber_set(&word);
    let action = fixed_chambers_by_action(&word, (-4, 4));
    println!(
        "word with factors at -1 and 2: formula {:?}, action fixes {:?}",
        formula,
        action.iter().collect::<Vec<_>>()
    );
    assert_eq!(formula, ChamberRay::Below(-1));

    // extend the identity-first enumeration twice and audit every prefix
    let mut e = Enumeration::single_group_seed(q, 0).unwrap();
    for _ in 0..2 {
        e = extend_directed_enumeration(&e).unwrap();
    }
    let audit = verify_directedness(&e);
    println!(
        "enumeration over positions {:?}: {} words, audit pass = {}",
        e.range,
        e.words.len(),
        audit.pass
    );

    // the enumeration covers the chamber window matching its range
    let params = TreeParams::new(q, "t").unwrap();
    let window = build_truncation(&params, (-2, 3), &HVertex::apartment(-2)).unwrap();
    let coverage = verify_covering(&e, &window);
    println!(
        "coverage of the radius-2 window: {}/{} chambers, minimal prefix {:?}",
        coverage.covered, coverage.total_chambers, coverage.minimal_prefix
    );

    // a window one level taller escapes the fixed range
    let tall = build_truncation(&params, (-2, 4), &HVertex::apartment(-2)).unwrap();
    let partial = verify_covering(&e, &tall);
    println!(
        "one more level: {} uncovered chambers remain",
        partial.uncovered_edges.len()
    );

    // sheet sequences: each new piece of a through-end line is an up-ray;
    // a bent line (both rays ascending) is the canonical non-example
    let seq = vec![
        ApartmentLike::ThroughEnd {
            word: Word::identity(q),
        },
        ApartmentLike::ThroughEnd {
            word: Word::factor(q, 0, 1).unwrap(),
        },
        ApartmentLike::ThroughEnd {
            word: Word::factor(q, 1, 1).unwrap(),
        },
    ];
    let sheets = sheet_sequence_check(&seq, (-4, 5));
    println!("through-end sheet sequence: pass = {}", sheets.pass);
    for s in &sheets.stages {
        println!("  stage {}: piece {:?}", s.index, s.piece);
    }
    let bent_first = vec![
        ApartmentLike::Bent {
            base: HVertex::apartment(0),
            digit_a: 0,
            digit_b: 1,
        },
        ApartmentLike::ThroughEnd {
            word: Word::identity(q),
        },
    ];
    let bad = sheet_sequence_check(&bent_first, (-4, 5));
    println!(
        "bent line first: pass = {} (the apartment's new piece is {:?})",
        bad.pass, bad.stages[1].piece
    );
}
