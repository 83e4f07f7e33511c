//! Root systems, formal places, and the weighted coordinate map on a
//! product of standard apartments.
//!
//! Roots are integer vectors in the simple-root basis and double as linear
//! forms on the apartment carrying the coordinates cut out by the base
//! roots. All linear forms are exact rationals; there is no floating point
//! in this module. The designated base roots are stored in the *negative*
//! convention (the forms taking negative values on the fundamental sector);
//! [`FormSet::with_positive_convention`] flips the signs for callers that
//! want the other convention.

use crate::rat::{self, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RootDataError {
    #[error("invalid Dynkin type {letter}{rank}: {constraint}")]
    InvalidType {
        letter: char,
        rank: usize,
        constraint: &'static str,
    },
    #[error("place `{0}`: {1}")]
    BadPlace(String, String),
    #[error("places must be non-empty")]
    NoPlaces,
    #[error("dimension mismatch: forms live on a {form_dim}-dimensional space, subspace is ambient {ambient}")]
    DimensionMismatch { form_dim: usize, ambient: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeLetter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLetter {
    pub fn from_char(c: char) -> Option<TypeLetter> {
        match c.to_ascii_uppercase() {
            'A' => Some(TypeLetter::A),
            'B' => Some(TypeLetter::B),
            'C' => Some(TypeLetter::C),
            'D' => Some(TypeLetter::D),
            'E' => Some(TypeLetter::E),
            'F' => Some(TypeLetter::F),
            'G' => Some(TypeLetter::G),
            _ => None,
        }
    }
    pub fn as_char(&self) -> char {
        match self {
            TypeLetter::A => 'A',
            TypeLetter::B => 'B',
            TypeLetter::C => 'C',
            TypeLetter::D => 'D',
            TypeLetter::E => 'E',
            TypeLetter::F => 'F',
            TypeLetter::G => 'G',
        }
    }
}

/// A Chevalley root system generated from its Cartan matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootSystem {
    pub type_letter: TypeLetter,
    pub rank: usize,
    /// Cartan matrix `a[i][j] = <alpha_j, alpha_i^v>`.
    pub cartan: Vec<Vec<i64>>,
    /// All roots, as integer vectors in the simple-root basis, sorted.
    pub roots: Vec<Vec<i64>>,
    /// Indices into `roots` of the designated base roots `-alpha_i`, in
    /// simple-root order.
    pub base_negative: Vec<usize>,
    /// Indices into `roots` of all negative roots, sorted.
    pub negative: Vec<usize>,
}

fn cartan_matrix(letter: TypeLetter, rank: usize) -> Result<Vec<Vec<i64>>, RootDataError> {
    use TypeLetter::*;
    let bad = |constraint| RootDataError::InvalidType {
        letter: letter.as_char(),
        rank,
        constraint,
    };
    let n = rank;
    let mut chain_edges: Vec<(usize, usize)> =
        (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
    }
    let put = |a: &mut Vec<Vec<i64>>, i: usize, j: usize, vij: i64, vji: i64| {
        a[i][j] = vij;
        a[j][i] = vji;
    };
    match letter {
        A => {
            if n < 1 {
                return Err(bad("A_n requires n >= 1"));
            }
            for (i, j) in chain_edges {
                put(&mut a, i, j, -1, -1);
            }
        }
        B => {
            if n < 2 {
                return Err(bad("B_n requires n >= 2"));
            }
            let last = chain_edges.pop().unwrap();
            for (i, j) in chain_edges {
                put(&mut a, i, j, -1, -1);
            }
            // alpha_n short: <alpha_{n-1}, alpha_n^v> = -2
            put(&mut a, last.0, last.1, -1, -2);
        }
        C => {
            if n < 3 {
                return Err(bad("C_n requires n >= 3 (C_2 duplicates B_2)"));
            }
            let last = chain_edges.pop().unwrap();
            for (i, j) in chain_edges {
                put(&mut a, i, j, -1, -1);
            }
            put(&mut a, last.0, last.1, -2, -1);
        }
        D => {
            if n < 4 {
                return Err(bad("D_n requires n >= 4 (D_3 duplicates A_3)"));
            }
            // chain on 0..n-2, fork at n-3 to n-1
            let edges: Vec<(usize, usize)> = (0..n - 2)
                .map(|i| (i, i + 1))
                .chain(std::iter::once((n - 3, n - 1)))
                .collect();
            for (i, j) in edges {
                put(&mut a, i, j, -1, -1);
            }
        }
        E => {
            if !(6..=8).contains(&n) {
                return Err(bad("E_n requires n in {6,7,8}"));
            }
            // Bourbaki numbering, 0-indexed: chain 0-2-3-4-..., node 1 attached to 3.
            let mut edges = vec![(0usize, 2usize), (1, 3)];
            for i in 2..n - 1 {
                edges.push((i, i + 1));
            }
            for (i, j) in edges {
                put(&mut a, i, j, -1, -1);
            }
        }
        F => {
            if n != 4 {
                return Err(bad("F_n requires n = 4"));
            }
            put(&mut a, 0, 1, -1, -1);
            put(&mut a, 1, 2, -2, -1);
            put(&mut a, 2, 3, -1, -1);
        }
        G => {
            if n != 2 {
                return Err(bad("G_n requires n = 2"));
            }
            put(&mut a, 0, 1, -1, -3);
        }
    }
    Ok(a)
}

/// Generate a root system by closing the simple roots under the simple
/// reflections (`s_i` changes coordinate `i` by `v_i -> v_i - sum_j a[i][j] v_j`).
pub fn build_root_system(letter: TypeLetter, rank: usize) -> Result<RootSystem, RootDataError> {
    let cartan = cartan_matrix(letter, rank)?;
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..rank {
        let mut e = vec![0i64; rank];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push(e);
    }
    while let Some(v) = queue.pop() {
        for i in 0..rank {
            let mut w = v.clone();
            let s: i64 = (0..rank).map(|j| cartan[i][j] * v[j]).sum();
            w[i] = v[i] - s;
            if seen.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    let roots: Vec<Vec<i64>> = seen.into_iter().collect();
    let negative: Vec<usize> = roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.iter().all(|&c| c <= 0))
        .map(|(i, _)| i)
        .collect();
    debug_assert_eq!(negative.len() * 2, roots.len());
    let mut base_negative = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut e = vec![0i64; rank];
        e[i] = -1;
        let idx = roots
            .iter()
            .position(|r| *r == e)
            .expect("negated simple root must be a root");
        base_negative.push(idx);
    }
    Ok(RootSystem {
        type_letter: letter,
        rank,
        cartan,
        roots,
        base_negative,
        negative,
    })
}

impl RootSystem {
    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    /// Positions of `self.base_negative` inside the `negative` list.
    pub fn base_positions_in_negative(&self) -> Vec<usize> {
        self.base_negative
            .iter()
            .map(|bi| {
                self.negative
                    .iter()
                    .position(|ni| ni == bi)
                    .expect("base roots are negative roots")
            })
            .collect()
    }

    /// Applying any simple reflection permutes the root set.
    pub fn reflection_closure_holds(&self) -> bool {
        let set: BTreeSet<&Vec<i64>> = self.roots.iter().collect();
        for i in 0..self.rank {
            for v in &self.roots {
                let s: i64 = (0..self.rank).map(|j| self.cartan[i][j] * v[j]).sum();
                let mut w = v.clone();
                w[i] = v[i] - s;
                if !set.contains(&w) {
                    return false;
                }
            }
        }
        true
    }
}

/// A formal place: residue-field data and the degree weight it contributes
/// to the coordinate map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceSpec {
    pub label: String,
    pub degree: u32,
    pub base_field_size: u64,
    pub residue_size: u64,
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 0u64;
    for cand in 2..=q {
        if q % cand == 0 {
            p = cand;
            break;
        }
    }
    let mut m = q;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

impl PlaceSpec {
    pub fn new(label: &str, degree: u32, base_field_size: u64) -> Result<PlaceSpec, RootDataError> {
        if degree < 1 {
            return Err(RootDataError::BadPlace(
                label.to_string(),
                "degree must be >= 1".into(),
            ));
        }
        if !is_prime_power(base_field_size) {
            return Err(RootDataError::BadPlace(
                label.to_string(),
                format!("base field size {base_field_size} is not a prime power"),
            ));
        }
        let residue_size = base_field_size.checked_pow(degree).ok_or_else(|| {
            RootDataError::BadPlace(label.to_string(), "residue size overflow".into())
        })?;
        Ok(PlaceSpec {
            label: label.to_string(),
            degree,
            base_field_size,
            residue_size,
        })
    }

    /// Unit-degree place over F_q, labelled `p<index>`.
    pub fn unit(index: usize, q: u64) -> PlaceSpec {
        PlaceSpec::new(&format!("p{}", index + 1), 1, q).expect("unit place is valid")
    }

    pub fn weight(&self) -> Rat {
        rat::rat(self.degree as i64)
    }
}

/// Provenance of a linear form: which place block and which root produced it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormTag {
    pub place: String,
    pub place_index: usize,
    /// Index into the producing root system's `negative` list.
    pub root_index: usize,
    pub is_base_root: bool,
}

/// An exact-rational linear form plus provenance and a zero flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedForm {
    pub coeffs: Vec<Rat>,
    pub tag: FormTag,
    pub is_zero: bool,
}

/// A system of exact-rational linear forms on a common space.
#[derive(Debug, Clone)]
pub struct FormSet {
    pub space_dim: usize,
    pub forms: Vec<TaggedForm>,
    /// True when stored in the negative base-root convention (the default).
    pub negative_convention: bool,
}

impl FormSet {
    pub fn covectors(&self) -> Vec<Vec<Rat>> {
        self.forms.iter().map(|f| f.coeffs.clone()).collect()
    }

    /// Flip every form's sign; documents a switch to the positive-root convention.
    pub fn with_positive_convention(&self) -> FormSet {
        FormSet {
            space_dim: self.space_dim,
            forms: self
                .forms
                .iter()
                .map(|f| TaggedForm {
                    coeffs: f.coeffs.iter().map(|c| -c.clone()).collect(),
                    tag: f.tag.clone(),
                    is_zero: f.is_zero,
                })
                .collect(),
            negative_convention: !self.negative_convention,
        }
    }
}

/// Lift every negative root of `rs` into each place block of the product
/// apartment space, scaled by that place's degree weight.
pub fn product_form_system(
    rs: &RootSystem,
    places: &[PlaceSpec],
) -> Result<FormSet, RootDataError> {
    if places.is_empty() {
        return Err(RootDataError::NoPlaces);
    }
    let n = rs.rank;
    let dim = places.len() * n;
    let base_set: BTreeSet<usize> = rs.base_negative.iter().copied().collect();
    let mut forms = Vec::with_capacity(places.len() * rs.negative.len());
    for (pi, place) in places.iter().enumerate() {
        let w = place.weight();
        for (ni, &ri) in rs.negative.iter().enumerate() {
            let mut coeffs = vec![Rat::zero(); dim];
            for (j, &c) in rs.roots[ri].iter().enumerate() {
                coeffs[pi * n + j] = rat::rat(c) * &w;
            }
            let is_zero = rat::is_zero_vec(&coeffs);
            forms.push(TaggedForm {
                coeffs,
                tag: FormTag {
                    place: place.label.clone(),
                    place_index: pi,
                    root_index: ni,
                    is_base_root: base_set.contains(&ri),
                },
                is_zero,
            });
        }
    }
    Ok(FormSet {
        space_dim: dim,
        forms,
        negative_convention: true,
    })
}

/// The map from the product apartment space onto the rank-dimensional
/// target: row `i` sums the degree-weighted `i`-th base-root coordinate over
/// all places.
#[derive(Debug, Clone)]
pub struct CoordinateMap {
    pub places: Vec<PlaceSpec>,
    pub rank: usize,
    pub weights: Vec<Rat>,
    /// rank x (|S| * rank) rational matrix.
    pub matrix: Vec<Vec<Rat>>,
}

impl CoordinateMap {
    pub fn new(rs: &RootSystem, places: &[PlaceSpec]) -> Result<CoordinateMap, RootDataError> {
        if places.is_empty() {
            return Err(RootDataError::NoPlaces);
        }
        let n = rs.rank;
        let dim = places.len() * n;
        let mut matrix = vec![vec![Rat::zero(); dim]; n];
        for (pi, place) in places.iter().enumerate() {
            let w = place.weight();
            for i in 0..n {
                // negative base-root convention: the kernel is unaffected
                matrix[i][pi * n + i] = -w.clone();
            }
        }
        Ok(CoordinateMap {
            places: places.to_vec(),
            rank: n,
            weights: places.iter().map(|p| p.weight()).collect(),
            matrix,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.places.len() * self.rank
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.iter().map(|row| rat::dot(row, v)).collect()
    }
}

/// Exact-rational basis of the kernel of a coordinate map.
#[derive(Debug, Clone)]
pub struct KernelSubspace {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<Rat>>,
}

pub fn kernel_subspace(map: &CoordinateMap) -> KernelSubspace {
    let dim = map.ambient_dim();
    let basis = rat::nullspace(&map.matrix, dim);
    debug_assert_eq!(basis.len(), map.rank * (map.places.len() - 1));
    debug_assert!(basis.iter().all(|v| rat::is_zero_vec(&map.apply(v))));
    KernelSubspace {
        ambient_dim: dim,
        basis,
    }
}

impl KernelSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an ambient vector known to lie in the subspace.
    pub fn coordinates_of(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if self.basis.is_empty() {
            return if rat::is_zero_vec(v) {
                Some(vec![])
            } else {
                None
            };
        }
        // columns = basis vectors
        let rows = self.ambient_dim;
        let m: Vec<Vec<Rat>> = (0..rows)
            .map(|r| self.basis.iter().map(|b| b[r].clone()).collect())
            .collect();
        rat::solve(&m, v)
    }
}

/// Express each form of `form_set` in the coordinates dual to the kernel
/// basis. Zero restrictions are retained and flagged.
pub fn restrict_forms(
    form_set: &FormSet,
    kernel: &KernelSubspace,
) -> Result<FormSet, RootDataError> {
    if form_set.space_dim != kernel.ambient_dim {
        return Err(RootDataError::DimensionMismatch {
            form_dim: form_set.space_dim,
            ambient: kernel.ambient_dim,
        });
    }
    let forms = form_set
        .forms
        .iter()
        .map(|f| {
            let coeffs: Vec<Rat> = kernel
                .basis
                .iter()
                .map(|b| rat::dot(&f.coeffs, b))
                .collect();
            let is_zero = rat::is_zero_vec(&coeffs);
            TaggedForm {
                coeffs,
                tag: f.tag.clone(),
                is_zero,
            }
        })
        .collect();
    Ok(FormSet {
        space_dim: kernel.dim(),
        forms,
        negative_convention: form_set.negative_convention,
    })
}

/// One-call pipeline: restricted negative-root system on the kernel.
pub fn restricted_negative_system(
    rs: &RootSystem,
    places: &[PlaceSpec],
) -> Result<(FormSet, KernelSubspace), RootDataError> {
    let lifted = product_form_system(rs, places)?;
    let map = CoordinateMap::new(rs, places)?;
    let kernel = kernel_subspace(&map);
    let restricted = restrict_forms(&lifted, &kernel)?;
    Ok((restricted, kernel))
}

// --- serialization (rationals as "num/den" strings) ---

#[derive(Serialize, Deserialize)]
pub struct FormSetDoc {
    pub space_dim: usize,
    pub negative_convention: bool,
    pub forms: Vec<FormDoc>,
}

#[derive(Serialize, Deserialize)]
pub struct FormDoc {
    pub coeffs: Vec<String>,
    pub place: String,
    pub root_index: usize,
    pub is_base_root: bool,
    pub is_zero: bool,
}

impl FormSet {
    pub fn to_doc(&self) -> FormSetDoc {
        FormSetDoc {
            space_dim: self.space_dim,
            negative_convention: self.negative_convention,
            forms: self
                .forms
                .iter()
                .map(|f| FormDoc {
                    coeffs: rat::format_vec(&f.coeffs),
                    place: f.tag.place.clone(),
                    root_index: f.tag.root_index,
                    is_base_root: f.tag.is_base_root,
                    is_zero: f.is_zero,
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct RootSystemDoc {
    #[serde(rename = "type")]
    pub type_letter: char,
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub places: Vec<PlaceDoc>,
    pub forms: Vec<FormDoc>,
}

#[derive(Serialize, Deserialize)]
pub struct PlaceDoc {
    pub label: String,
    pub degree: u32,
    pub base_field_size: u64,
}

/// The JSON document combining a root system, its places, and the lifted
/// form system.
pub fn root_system_doc(rs: &RootSystem, places: &[PlaceSpec], forms: &FormSet) -> RootSystemDoc {
    RootSystemDoc {
        type_letter: rs.type_letter.as_char(),
        rank: rs.rank,
        roots: rs.roots.clone(),
        places: places
            .iter()
            .map(|p| PlaceDoc {
                label: p.label.clone(),
                degree: p.degree,
                base_field_size: p.base_field_size,
            })
            .collect(),
        forms: forms.to_doc().forms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    // classical root counts, the independent oracle for the generator
    fn classical_count(letter: TypeLetter, n: usize) -> usize {
        use TypeLetter::*;
        match letter {
            A => n * (n + 1),
            B | C => 2 * n * n,
            D => 2 * n * (n - 1),
            E => match n {
                6 => 72,
                7 => 126,
                8 => 240,
                _ => unreachable!(),
            },
            F => 48,
            G => 12,
        }
    }

    #[test]
    fn generated_counts_match_classical() {
        let cases = [
            (TypeLetter::A, 1),
            (TypeLetter::A, 2),
            (TypeLetter::A, 3),
            (TypeLetter::A, 4),
            (TypeLetter::B, 2),
            (TypeLetter::B, 3),
            (TypeLetter::B, 4),
            (TypeLetter::C, 3),
            (TypeLetter::C, 4),
            (TypeLetter::D, 4),
            (TypeLetter::E, 6),
            (TypeLetter::E, 7),
            (TypeLetter::E, 8),
            (TypeLetter::F, 4),
            (TypeLetter::G, 2),
        ];
        for (l, n) in cases {
            let rs = build_root_system(l, n).unwrap();
            assert_eq!(
                rs.root_count(),
                classical_count(l, n),
                "count mismatch for {}{}",
                l.as_char(),
                n
            );
            assert_eq!(rs.negative.len() * 2, rs.root_count());
            assert!(rs.reflection_closure_holds());
        }
    }

    #[test]
    fn rank_one_symmetry() {
        let rs = build_root_system(TypeLetter::A, 1).unwrap();
        assert_eq!(rs.roots, vec![vec![-1], vec![1]]);
        assert_eq!(rs.negative, vec![0]);
        assert_eq!(rs.base_negative, vec![0]);
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(build_root_system(TypeLetter::C, 2).is_err());
        assert!(build_root_system(TypeLetter::D, 3).is_err());
        assert!(build_root_system(TypeLetter::E, 9).is_err());
        assert!(build_root_system(TypeLetter::F, 3).is_err());
        assert!(build_root_system(TypeLetter::G, 3).is_err());
    }

    #[test]
    fn negative_roots_are_nonneg_combinations_of_base() {
        for (l, n) in [(TypeLetter::A, 3), (TypeLetter::B, 3), (TypeLetter::D, 4)] {
            let rs = build_root_system(l, n).unwrap();
            for &ni in &rs.negative {
                assert!(rs.roots[ni].iter().all(|&c| c <= 0));
            }
        }
    }

    #[test]
    fn product_forms_a1_two_places() {
        let rs = build_root_system(TypeLetter::A, 1).unwrap();
        let places = vec![PlaceSpec::unit(0, 2), PlaceSpec::unit(1, 2)];
        let fs = product_form_system(&rs, &places).unwrap();
        assert_eq!(fs.forms.len(), 2);
        assert_eq!(fs.forms[0].coeffs, vec![rat(-1), rat(0)]);
        assert_eq!(fs.forms[1].coeffs, vec![rat(0), rat(-1)]);
    }

    #[test]
    fn product_forms_weighted_by_degree() {
        let rs = build_root_system(TypeLetter::A, 1).unwrap();
        let places = vec![PlaceSpec::new("p1", 2, 2).unwrap()];
        let fs = product_form_system(&rs, &places).unwrap();
        assert_eq!(fs.forms.len(), 1);
        assert_eq!(fs.forms[0].coeffs, vec![rat(-2)]);
    }

    #[test]
    fn product_forms_a2_counts() {
        let rs = build_root_system(TypeLetter::A, 2).unwrap();
        let places = vec![PlaceSpec::unit(0, 2), PlaceSpec::unit(1, 2)];
        let fs = product_form_system(&rs, &places).unwrap();
        assert_eq!(fs.forms.len(), 6);
        assert_eq!(fs.space_dim, 4);
    }

    #[test]
    fn kernel_a1_two_places() {
        let rs = build_root_system(TypeLetter::A, 1).unwrap();
        let places = vec![PlaceSpec::unit(0, 2), PlaceSpec::unit(1, 2)];
        let map = CoordinateMap::new(&rs, &places).unwrap();
        let k = kernel_subspace(&map);
        assert_eq!(k.dim(), 1);
        // spans the line through (1,-1)
        let v = &k.basis[0];
        assert_eq!(&v[0] + &v[1], rat(0));
        assert!(!v[0].is_zero());
    }

    #[test]
    fn kernel_single_place_is_trivial() {
        let rs = build_root_system(TypeLetter::A, 1).unwrap();
        let places = vec![PlaceSpec::unit(0, 3)];
        let k = kernel_subspace(&CoordinateMap::new(&rs, &places).unwrap());
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn kernel_a2_two_places_dim() {
        let rs = build_root_system(TypeLetter::A, 2).unwrap();
        let places = vec![PlaceSpec::unit(0, 2), PlaceSpec::unit(1, 2)];
        let k = kernel_subspace(&CoordinateMap::new(&rs, &places).unwrap());
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn restriction_a1_gives_opposite_pair() {
        let rs = build_root_system(TypeLetter::A, 1).unwrap();
        let places = vec![PlaceSpec::unit(0, 2), PlaceSpec::unit(1, 2)];
        let (restricted, _) = restricted_negative_system(&rs, &places).unwrap();
        assert_eq!(restricted.forms.len(), 2);
        let a = &restricted.forms[0].coeffs[0];
        let b = &restricted.forms[1].coeffs[0];
        assert!(!a.is_zero());
        assert_eq!(a.clone() + b.clone(), rat(0));
    }

    #[test]
    fn restriction_a2_gives_hexagon() {
        let rs = build_root_system(TypeLetter::A, 2).unwrap();
        let places = vec![PlaceSpec::unit(0, 2), PlaceSpec::unit(1, 2)];
        let (restricted, _) = restricted_negative_system(&rs, &places).unwrap();
        assert_eq!(restricted.forms.len(), 6);
        // pairs up to sign: +-f1, +-f2, +-(f1+f2) for some basis
        let mut seen = BTreeSet::new();
        for f in &restricted.forms {
            assert!(!f.is_zero, "no zero restrictions with two places");
            seen.insert(rat::format_vec(&f.coeffs));
        }
        assert_eq!(seen.len(), 6);
        for f in &restricted.forms {
            let neg: Vec<Rat> = f.coeffs.iter().map(|c| -c.clone()).collect();
            assert!(
                seen.contains(&rat::format_vec(&neg)),
                "closed under negation"
            );
        }
    }

    #[test]
    fn restriction_single_place_all_zero_flagged() {
        let rs = build_root_system(TypeLetter::A, 2).unwrap();
        let places = vec![PlaceSpec::unit(0, 2)];
        let (restricted, _) = restricted_negative_system(&rs, &places).unwrap();
        assert!(restricted.forms.iter().all(|f| f.is_zero));
    }

    #[test]
    fn place_validation() {
        assert!(PlaceSpec::new("p", 0, 2).is_err());
        assert!(PlaceSpec::new("p", 1, 6).is_err());
        assert!(PlaceSpec::new("p", 1, 1).is_err());
        let p = PlaceSpec::new("p", 3, 2).unwrap();
        assert_eq!(p.residue_size, 8);
        let p9 = PlaceSpec::new("p", 2, 3).unwrap();
        assert_eq!(p9.residue_size, 9);
    }

    #[test]
    fn json_doc_shape() {
        let rs = build_root_system(TypeLetter::A, 2).unwrap();
        let places = vec![PlaceSpec::unit(0, 2), PlaceSpec::unit(1, 3)];
        let fs = product_form_system(&rs, &places).unwrap();
        let doc = root_system_doc(&rs, &places, &fs);
        let v = serde_json::to_value(&doc).unwrap();
        assert_eq!(v["type"], serde_json::json!("A"));
        assert_eq!(v["rank"], serde_json::json!(2));
        assert_eq!(v["roots"].as_array().unwrap().len(), 6);
        assert_eq!(v["forms"].as_array().unwrap().len(), 6);
        assert!(
            v["forms"][0]["coeffs"][0].is_string(),
            "rationals serialize as strings"
        );
        let dim_err = restrict_forms(
            &fs,
            &KernelSubspace {
                ambient_dim: 3,
                basis: vec![],
            },
        );
        assert!(matches!(
            dim_err,
            Err(RootDataError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn positive_convention_flip() {
        let rs = build_root_system(TypeLetter::A, 1).unwrap();
        let places = vec![PlaceSpec::unit(0, 2)];
        let fs = product_form_system(&rs, &places).unwrap();
        let pos = fs.with_positive_convention();
        assert!(!pos.negative_convention);
        assert_eq!(pos.forms[0].coeffs, vec![rat(1)]);
    }
}
