//! The two polyhedral bounds for the higher geometric invariants, and the
//! finiteness certificates they yield for torus-direction subgroups.
//!
//! In rank 1 the bounds coincide and decide every query; in higher rank a
//! strip between them stays INDETERMINATE by design.
//!
//! Run with: cargo run --example sigma_bounds

use horotree::cones::{
    base_forms_by_place, conv_m_member, conv_ms_member, finiteness_report,
    normal_subgroup_certificate, sigma_bound_classify, Verdict,
};
use horotree::rat::{rat, ratio, Rat};
use horotree::root_data::{
    build_root_system, kernel_subspace, restricted_negative_system, CoordinateMap, PlaceSpec,
    TypeLetter,
};

fn main() {
    // rank 1: lower and upper bounds agree on a grid of queries
    let rs1 = build_root_system(TypeLetter::A, 1).unwrap();
    let places3: Vec<_> = (0..3).map(|i| PlaceSpec::unit(i, 2)).collect();
    let (restricted, _) = restricted_negative_system(&rs1, &places3).unwrap();
    let base = base_forms_by_place(&restricted, 3);
    let all = restricted.covectors();
    let mut agree = 0;
    let mut total = 0;
    for x in -5i64..=5 {
        for y in -5i64..=5 {
            if x == 0 && y == 0 {
                continue;
            }
            let q = vec![rat(x), rat(y)];
            for m in [1usize, 2] {
                let lower = conv_ms_member(&base, m, &q).unwrap().member;
                let upper = conv_m_member(&all, m, &q).unwrap().member;
                total += 1;
                if lower == upper {
                    agree += 1;
                }
            }
        }
    }
    println!("rank 1, |S|=3: bounds agree on {agree}/{total} grid queries");
    assert_eq!(agree, total);

    // rank 2: the strip between the bounds
    let rs2 = build_root_system(TypeLetter::A, 2).unwrap();
    let places2: Vec<_> = (0..2).map(|i| PlaceSpec::unit(i, 2)).collect();
    let (r2, _) = restricted_negative_system(&rs2, &places2).unwrap();
    let base2 = base_forms_by_place(&r2, 2);
    let f1 = base2[0][0].clone();
    let f2 = base2[0][1].clone();
    let sum: Vec<Rat> = f1.iter().zip(&f2).map(|(a, b)| a + b).collect();
    for (name, q) in [
        ("f1", f1.clone()),
        ("f1+f2", sum),
        ("2*f2", f2.iter().map(|c| c * rat(2)).collect()),
    ] {
        let v = sigma_bound_classify(&rs2, &places2, 1, &q).unwrap();
        println!("A2, |S|=2, m=1, query {name}: {:?} ({})", v.verdict, v.note);
    }

    // torus-direction normal subgroups
    println!();
    let diag_direction = vec![vec![rat(1), rat(-1), rat(-1), rat(1)]];
    let v = normal_subgroup_certificate(&rs2, &places2, &diag_direction, 1).unwrap();
    println!("one-parameter diagonal direction, m=1: {:?}", v.verdict);
    assert_eq!(v.verdict, Verdict::Indeterminate);

    let map = CoordinateMap::new(&rs2, &places2).unwrap();
    let kernel = kernel_subspace(&map);
    let full = normal_subgroup_certificate(&rs2, &places2, &kernel.basis, 1).unwrap();
    println!("full torus, m=1: {:?}", full.verdict);
    assert_eq!(full.verdict, Verdict::CertifiedFm);

    let rs_a1 = build_root_system(TypeLetter::A, 1).unwrap();
    let trivial = normal_subgroup_certificate(&rs_a1, &places2, &[], 1).unwrap();
    println!(
        "rank 1, trivial direction (the unipotent part), m=1: {:?}",
        trivial.verdict
    );
    assert_eq!(trivial.verdict, Verdict::CertifiedNotFm);

    // the finiteness pattern by number of places
    println!("\nfiniteness pattern: |S| -> (F_type, first failing FP)");
    for s in 1..=5 {
        let r = finiteness_report(s);
        println!("  |S| = {s}: F_{} but not FP_{}", r.f_type, r.not_fp);
        let _ = ratio(1, 2);
    }
}
