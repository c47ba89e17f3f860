//! Reconstruction of formal Bethe vectors from subchain data.
//!
//! Every sum is enumerated term by term in a fixed order: bipartitions and
//! ordered partitions in base-`K` counting order over the parameter indices,
//! local placements as (positions, permutation) pairs with positions in
//! lexicographic order. Partial `B` operators act on their own sites and are
//! embedded as `Id ⊗ B ⊗ Id` when applied.
//!
//! Cross-block weights follow the reading under which the sums reproduce
//! `Π B(λⱼ)|0⟩`: a parameter placed in block `b` collects `aᵢ(λ)` from
//! every block `i < b` and `dⱼ(λ)` from every block `j > b`, and each pair
//! of parameters in blocks `i < j` contributes `f(λ_left, λ_right)`.

use std::time::Instant;

use itertools::Itertools;
use serde::Serialize;

use crate::bethe::{formal_bethe_vector, SpectralSet};
use crate::chain::{
    l_operator, partial_monodromy, partial_vacuum_eigenvalues, pseudovacuum, ChainSpec, SiteRange,
};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::linalg::{relative_difference, Matrix, StateVector};
use crate::scalar::Scalar;

/// Cut positions partitioning `[1, N]` into `K = cuts + 1` contiguous
/// nonempty subchains. A cut at `x` ends a subchain after site `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Split {
    n: usize,
    cuts: Vec<usize>,
}

impl Split {
    pub fn new(n: usize, cuts: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSplit("empty chain".into()));
        }
        if cuts.iter().any(|&c| c < 1 || c >= n) {
            return Err(Error::InvalidSplit(format!(
                "cuts {cuts:?} must lie in 1..{n}"
            )));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSplit(format!(
                "cuts {cuts:?} must be strictly increasing"
            )));
        }
        Ok(Split { n, cuts })
    }

    pub fn whole(n: usize) -> Result<Self> {
        Split::new(n, Vec::new())
    }

    pub fn at(n: usize, x: usize) -> Result<Self> {
        Split::new(n, vec![x])
    }

    /// One site per subchain (`K = N`).
    pub fn singletons(n: usize) -> Result<Self> {
        Split::new(n, (1..n).collect())
    }

    /// All `2^(N−1)` contiguous splits, ordered by `K` then cut positions.
    pub fn all(n: usize) -> Vec<Split> {
        let mut out: Vec<Split> = (0..n.max(1))
            .flat_map(|k| (1..n).combinations(k))
            .map(|cuts| Split { n, cuts })
            .collect();
        out.sort_by(|a, b| a.cuts.len().cmp(&b.cuts.len()).then(a.cuts.cmp(&b.cuts)));
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.cuts.len() + 1
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn blocks(&self) -> Vec<SiteRange> {
        let mut starts = vec![1];
        starts.extend(self.cuts.iter().map(|c| c + 1));
        let mut ends: Vec<usize> = self.cuts.clone();
        ends.push(self.n);
        starts
            .into_iter()
            .zip(ends)
            .map(|(first, last)| SiteRange { first, last })
            .collect()
    }
}

/// Division of parameter indices `0..M` into `K` labelled, possibly empty,
/// disjoint blocks covering all indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    /// Block label of every parameter index.
    pub fn from_assignment(k: usize, assignment: &[usize]) -> Self {
        let mut blocks = vec![Vec::new(); k];
        for (element, &block) in assignment.iter().enumerate() {
            blocks[block].push(element);
        }
        OrderedPartition { blocks }
    }

    pub fn assignment(&self) -> Vec<usize> {
        let m = self.blocks.iter().map(Vec::len).sum();
        let mut out = vec![0; m];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x] = b;
            }
        }
        out
    }

    pub fn max_occupancy(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }
}

fn base_k_digits(mut t: usize, m: usize, k: usize) -> Vec<usize> {
    (0..m)
        .map(|_| {
            let digit = t % k;
            t /= k;
            digit
        })
        .collect()
}

/// All `K^M` ordered partitions; index `x` goes to block digit `x` of the
/// counter written in base `K` (least significant digit first).
pub fn enumerate_ordered_partitions(m: usize, k: usize) -> impl Iterator<Item = OrderedPartition> {
    assert!(k >= 1, "at least one block");
    let count = k.pow(m as u32);
    (0..count).map(move |t| OrderedPartition::from_assignment(k, &base_k_digits(t, m, k)))
}

/// All `2^M` pairs `(𝒥, 𝒥̄)` in binary counting order: index `x` lies in
/// `𝒥̄` iff bit `x` of the counter is set.
pub fn enumerate_bipartitions(m: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    enumerate_ordered_partitions(m, 2).map(|p| {
        let mut blocks = p.blocks.into_iter();
        (blocks.next().unwrap(), blocks.next().unwrap())
    })
}

/// A decomposed vector together with the number of terms summed.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub vector: StateVector,
    pub terms: usize,
}

/// Which ordered partitions to sum over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PartitionEnumeration {
    #[default]
    Full,
    /// Only partitions with `|𝒥ₖ| ≤ 1`.
    SingleOccupancy,
}

/// Per-block data evaluated once per parameter.
struct BlockData {
    range: SiteRange,
    /// `B_b(λₓ)` on the block's own sites.
    creation: Vec<Matrix>,
    a: Vec<Scalar>,
    d: Vec<Scalar>,
}

struct Prepared {
    blocks: Vec<BlockData>,
    /// `f[x][y] = f(λₓ, λ_y)` for `x ≠ y`.
    f: Vec<Vec<Option<Scalar>>>,
    vacuum: StateVector,
}

fn f_table(spec: &ChainSpec, lambdas: &[Scalar]) -> Result<Vec<Vec<Option<Scalar>>>> {
    let m = lambdas.len();
    let mut table = vec![vec![None; m]; m];
    for x in 0..m {
        for y in 0..m {
            if x != y {
                table[x][y] = Some(spec.kernel().f(&lambdas[x], &lambdas[y])?);
            }
        }
    }
    Ok(table)
}

fn prepare(spec: &ChainSpec, split: &Split, set: &SpectralSet) -> Result<Prepared> {
    if split.n() != spec.len() {
        return Err(Error::InvalidSplit(format!(
            "split is for {} sites, chain has {}",
            split.n(),
            spec.len()
        )));
    }
    let lambdas = set.attach(spec)?;
    let blocks = split
        .blocks()
        .into_iter()
        .map(|range| {
            let mut data = BlockData {
                range,
                creation: Vec::new(),
                a: Vec::new(),
                d: Vec::new(),
            };
            for lambda in &lambdas {
                data.creation
                    .push(partial_monodromy(spec, range, lambda)?.b);
                let (a, d) = partial_vacuum_eigenvalues(spec, range, lambda)?;
                data.a.push(a);
                data.d.push(d);
            }
            Ok(data)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared {
        blocks,
        f: f_table(spec, &lambdas)?,
        vacuum: pseudovacuum(spec.len(), spec.mode()),
    })
}

impl Prepared {
    /// `Π_b Π_{x ∈ 𝒥_b} B_b(λₓ) |0⟩`.
    fn creation_product(&self, assignment: &[usize]) -> StateVector {
        let mut v = self.vacuum.clone();
        for (x, &b) in assignment.iter().enumerate().rev() {
            let block = &self.blocks[b];
            v = v.apply_on_sites(&block.creation[x], block.range.first);
            if v.is_zero() {
                break;
            }
        }
        v
    }

    fn cross_weight(&self, assignment: &[usize]) -> Scalar {
        let mut w = Scalar::one(self.vacuum.mode());
        for (x, &bx) in assignment.iter().enumerate() {
            for i in 0..bx {
                w = w * &self.blocks[i].a[x];
            }
            for j in bx + 1..self.blocks.len() {
                w = w * &self.blocks[j].d[x];
            }
            for (y, &by) in assignment.iter().enumerate() {
                if bx < by {
                    w = w * self.f[x][y].as_ref().expect("x ≠ y");
                }
            }
        }
        w
    }

    fn term(&self, assignment: &[usize]) -> Option<StateVector> {
        let v = self.creation_product(assignment);
        if v.is_zero() {
            return None;
        }
        Some(v.scaled(&self.cross_weight(assignment)))
    }
}

/// Two-subchain reconstruction:
/// `Σ_{𝒥} Π_{𝒥, 𝒥̄} f(λ_{k₁}, λ_{k₂}) Π_{𝒥} d₂ Π_{𝒥̄} a₁ · B₁(λ_𝒥) B₂(λ_𝒥̄) |0⟩`.
pub fn two_component_vector(
    spec: &ChainSpec,
    split: &Split,
    set: &SpectralSet,
) -> Result<Expansion> {
    two_component_vector_with(spec, split, set, Strategy::default())
}

pub fn two_component_vector_with(
    spec: &ChainSpec,
    split: &Split,
    set: &SpectralSet,
    strategy: Strategy,
) -> Result<Expansion> {
    if split.k() != 2 {
        return Err(Error::InvalidSplit(format!(
            "two-component formula needs K = 2, got {}",
            split.k()
        )));
    }
    let prep = prepare(spec, split, set)?;
    let (left, right) = (&prep.blocks[0], &prep.blocks[1]);
    let pairs: Vec<_> = enumerate_bipartitions(set.len()).collect();
    let vector = exec::ordered_sum(
        strategy,
        pairs.len(),
        &StateVector::zeros(spec.len(), spec.mode()),
        |t| {
            let (inner, outer) = &pairs[t];
            let mut v = prep.vacuum.clone();
            for &y in outer.iter().rev() {
                v = v.apply_on_sites(&right.creation[y], right.range.first);
            }
            for &x in inner.iter().rev() {
                v = v.apply_on_sites(&left.creation[x], left.range.first);
            }
            if v.is_zero() {
                return Ok::<_, Error>(None);
            }
            let mut w = Scalar::one(spec.mode());
            for &x in inner {
                w = w * &right.d[x];
                for &y in outer {
                    w = w * prep.f[x][y].as_ref().expect("disjoint");
                }
            }
            for &y in outer {
                w = w * &left.a[y];
            }
            Ok(Some(v.scaled(&w)))
        },
    )?;
    Ok(Expansion {
        vector,
        terms: pairs.len(),
    })
}

/// `K`-subchain reconstruction summed over all ordered partitions.
pub fn multi_component_vector(
    spec: &ChainSpec,
    split: &Split,
    set: &SpectralSet,
) -> Result<Expansion> {
    multi_component_vector_with(
        spec,
        split,
        set,
        PartitionEnumeration::Full,
        Strategy::default(),
    )
}

pub fn multi_component_vector_with(
    spec: &ChainSpec,
    split: &Split,
    set: &SpectralSet,
    enumeration: PartitionEnumeration,
    strategy: Strategy,
) -> Result<Expansion> {
    let prep = prepare(spec, split, set)?;
    let (m, k) = (set.len(), split.k());
    let assignments: Vec<Vec<usize>> = match enumeration {
        PartitionEnumeration::Full => (0..k.pow(m as u32))
            .map(|t| base_k_digits(t, m, k))
            .collect(),
        PartitionEnumeration::SingleOccupancy => (0..k).permutations(m).collect(),
    };
    let vector = exec::ordered_sum(
        strategy,
        assignments.len(),
        &StateVector::zeros(spec.len(), spec.mode()),
        |t| Ok::<_, Error>(prep.term(&assignments[t])),
    )?;
    Ok(Expansion {
        vector,
        terms: assignments.len(),
    })
}

/// Local-structure expansion over positions `n₁ < … < n_M` and parameter
/// permutations, with single-site creation operators `Bₙ(λ) = (Lₙ(λ, ξₙ))₁₂`.
pub fn local_structure_vector(spec: &ChainSpec, set: &SpectralSet) -> Result<Expansion> {
    local_structure_vector_with(spec, set, Strategy::default())
}

pub fn local_structure_vector_with(
    spec: &ChainSpec,
    set: &SpectralSet,
    strategy: Strategy,
) -> Result<Expansion> {
    let lambdas = set.attach(spec)?;
    let (n, m) = (spec.len(), lambdas.len());
    let mut alpha = vec![Vec::with_capacity(n); m];
    let mut delta = vec![Vec::with_capacity(n); m];
    let mut local_b = vec![Vec::with_capacity(n); m];
    for (x, lambda) in lambdas.iter().enumerate() {
        for site in 1..=n {
            alpha[x].push(spec.alpha(lambda, site)?);
            delta[x].push(spec.delta(lambda, site)?);
            local_b[x].push(l_operator(spec, site, lambda)?.b);
        }
    }
    let f = f_table(spec, &lambdas)?;
    let positions: Vec<Vec<usize>> = (1..=n).combinations(m).collect();
    let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let terms = positions.len() * perms.len();
    let vacuum = pseudovacuum(n, spec.mode());

    let vector = exec::ordered_sum(strategy, terms, &StateVector::zeros(n, spec.mode()), |t| {
        let place = &positions[t / perms.len()];
        let sigma = &perms[t % perms.len()];
        let mut v = vacuum.clone();
        for l in (0..m).rev() {
            v = v.apply_on_sites(&local_b[sigma[l]][place[l] - 1], place[l]);
        }
        let mut w = Scalar::one(spec.mode());
        for l in 0..m {
            let x = sigma[l];
            for i in 1..place[l] {
                w = w * &alpha[x][i - 1];
            }
            for j in place[l] + 1..=n {
                w = w * &delta[x][j - 1];
            }
            for &y in &sigma[l + 1..] {
                w = w * f[x][y].as_ref().expect("distinct");
            }
        }
        Ok::<_, Error>(Some(v.scaled(&w)))
    })?;
    Ok(Expansion { vector, terms })
}

/// Closed form for homogeneous chains:
/// `Π δᴺ/α · Σₙ Bₙ₁⋯Bₙₘ|0⟩ Σ_σ σ(Π_{i<j} f(λᵢ,λⱼ) Π_k (α/δ)(λ_k)^{n_k})`.
pub fn homogeneous_coordinate_vector(spec: &ChainSpec, set: &SpectralSet) -> Result<Expansion> {
    if !spec.is_homogeneous() {
        return Err(Error::HomogeneousOnly);
    }
    let lambdas = set.attach(spec)?;
    let (n, m) = (spec.len(), lambdas.len());
    let mut prefactor = Scalar::one(spec.mode());
    let mut ratio = Vec::with_capacity(m);
    for (x, lambda) in lambdas.iter().enumerate() {
        let alpha = spec.alpha(lambda, 1)?;
        let delta = spec.delta(lambda, 1)?;
        if alpha.is_zero() || delta.is_zero() {
            return Err(Error::VanishingLocalEigenvalue(x + 1));
        }
        prefactor = prefactor * delta.powi(n as u32).try_div(&alpha)?;
        ratio.push(alpha.try_div(&delta)?);
    }
    let f = f_table(spec, &lambdas)?;
    // Local creation operators do not depend on the spectral parameter.
    let creation = l_operator(spec, 1, &spec.xi()[0])?.b;
    let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
    let mut vector = pseudovacuum(n, spec.mode()).scaled(&Scalar::zero(spec.mode()));
    let mut terms = 0;
    for place in (1..=n).combinations(m) {
        let mut amplitude = Scalar::zero(spec.mode());
        for sigma in &perms {
            let mut w = Scalar::one(spec.mode());
            for i in 0..m {
                for j in i + 1..m {
                    w = w * f[sigma[i]][sigma[j]].as_ref().expect("distinct");
                }
                w = w * ratio[sigma[i]].powi(place[i] as u32);
            }
            amplitude = amplitude + w;
            terms += 1;
        }
        let mut v = pseudovacuum(n, spec.mode());
        for &site in place.iter().rev() {
            v = v.apply_on_sites(&creation, site);
        }
        vector.add_assign(&v.scaled(&(&amplitude * &prefactor)));
    }
    Ok(Expansion { vector, terms })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionRow {
    pub formula: String,
    pub terms: Option<usize>,
    pub difference: Option<f64>,
    pub error: Option<String>,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub rows: Vec<DecompositionRow>,
}

impl DecompositionReport {
    pub fn max_difference(&self) -> Option<f64> {
        self.rows
            .iter()
            .map(|r| r.difference)
            .collect::<Option<Vec<_>>>()
            .map(|d| d.into_iter().fold(0.0, f64::max))
    }
}

fn split_label(split: &Split) -> String {
    split.cuts().iter().map(|c| c.to_string()).join(",")
}

/// Compares each requested reconstruction with `Π B(λⱼ)|0⟩`.
///
/// Rows: two-component (for every `K = 2` split), multi-component (every
/// split), local structure, and the homogeneous closed form when the chain
/// is homogeneous or `request_closed_form` is set. Errors are recorded per
/// row.
pub fn decomposition_report(
    spec: &ChainSpec,
    set: &SpectralSet,
    splits: &[Split],
    request_closed_form: bool,
) -> DecompositionReport {
    let reference = formal_bethe_vector(spec, set);
    let mut rows = Vec::new();
    let mut run = |formula: String, compute: &dyn Fn() -> Result<Expansion>| {
        let start = Instant::now();
        let outcome = reference
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|r| compute().map(|e| (relative_difference(&e.vector, r), e.terms)));
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        rows.push(match outcome {
            Ok((difference, terms)) => DecompositionRow {
                formula,
                terms: Some(terms),
                difference: Some(difference),
                error: None,
                elapsed_ms,
            },
            Err(e) => DecompositionRow {
                formula,
                terms: None,
                difference: None,
                error: Some(e.to_string()),
                elapsed_ms,
            },
        });
    };
    for split in splits {
        if split.k() == 2 {
            run(format!("two-component[{}]", split_label(split)), &|| {
                two_component_vector(spec, split, set)
            });
        }
        run(format!("multi-component[{}]", split_label(split)), &|| {
            multi_component_vector(spec, split, set)
        });
    }
    run("local-structure".into(), &|| {
        local_structure_vector(spec, set)
    });
    if spec.is_homogeneous() || request_closed_form {
        run("homogeneous-closed-form".into(), &|| {
            homogeneous_coordinate_vector(spec, set)
        });
    }
    DecompositionReport { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::Kernel;
    use crate::scalar::Mode;
    use num_complex::Complex64;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::ratio(p, d)
    }

    fn xxx(xi: &[Scalar]) -> ChainSpec {
        ChainSpec::new(Kernel::Rational, xi.to_vec(), Mode::Exact).unwrap()
    }

    fn set(values: &[Scalar]) -> SpectralSet {
        SpectralSet::new(values.to_vec()).unwrap()
    }

    #[test]
    fn split_validation_and_blocks() {
        assert!(Split::new(4, vec![0]).is_err());
        assert!(Split::new(4, vec![4]).is_err());
        assert!(Split::new(4, vec![2, 2]).is_err());
        let s = Split::new(5, vec![1, 3]).unwrap();
        assert_eq!(s.k(), 3);
        assert_eq!(
            s.blocks(),
            vec![
                SiteRange { first: 1, last: 1 },
                SiteRange { first: 2, last: 3 },
                SiteRange { first: 4, last: 5 }
            ]
        );
        assert_eq!(Split::all(4).len(), 8);
        assert_eq!(Split::all(1), vec![Split::whole(1).unwrap()]);
        assert_eq!(Split::singletons(3).unwrap().k(), 3);
    }

    #[test]
    fn partition_counts() {
        let empty: Vec<_> = enumerate_bipartitions(0).collect();
        assert_eq!(empty, vec![(vec![], vec![])]);
        assert_eq!(enumerate_bipartitions(2).count(), 4);
        assert_eq!(enumerate_ordered_partitions(2, 3).count(), 9);
        let single: Vec<_> = enumerate_ordered_partitions(0, 4).collect();
        assert_eq!(single.len(), 1);
        assert!(single[0].blocks.iter().all(Vec::is_empty));
        for (j, jbar) in enumerate_bipartitions(4) {
            let mut all: Vec<_> = j.iter().chain(&jbar).copied().collect();
            all.sort();
            assert_eq!(all, vec![0, 1, 2, 3]);
        }
        let from_k2: Vec<_> = enumerate_ordered_partitions(3, 2)
            .map(|p| (p.blocks[0].clone(), p.blocks[1].clone()))
            .collect();
        assert_eq!(from_k2, enumerate_bipartitions(3).collect::<Vec<_>>());
        let p = OrderedPartition::from_assignment(3, &[2, 0, 2]);
        assert_eq!(p.assignment(), vec![2, 0, 2]);
        assert_eq!(p.max_occupancy(), 2);
    }

    #[test]
    fn two_component_single_parameter_terms() {
        // M = 1: the 𝒥 = {1} term carries d₂(λ), the 𝒥 = ∅ term a₁(λ).
        let spec = xxx(&[q(0, 1), q(1, 2), q(-1, 3)]);
        let split = Split::at(3, 1).unwrap();
        let lambda = q(2, 7);
        let exp = two_component_vector(&spec, &split, &set(std::slice::from_ref(&lambda))).unwrap();
        let left = partial_monodromy(&spec, split.blocks()[0], &lambda).unwrap();
        let right = partial_monodromy(&spec, split.blocks()[1], &lambda).unwrap();
        let (a1, _) = partial_vacuum_eigenvalues(&spec, split.blocks()[0], &lambda).unwrap();
        let (_, d2) = partial_vacuum_eigenvalues(&spec, split.blocks()[1], &lambda).unwrap();
        let vac = pseudovacuum(3, Mode::Exact);
        let mut expected = vac.apply_on_sites(&left.b, 1).scaled(&d2);
        expected.add_assign(&vac.apply_on_sites(&right.b, 2).scaled(&a1));
        assert_eq!(exp.vector, expected);
        assert_eq!(exp.terms, 2);
    }

    #[test]
    fn reconstructions_match_formal_vector() {
        let spec = xxx(&[q(0, 1), q(1, 2), q(-2, 3), q(1, 5)]);
        let s = set(&[q(3, 7), q(-5, 2)]);
        let formal = formal_bethe_vector(&spec, &s).unwrap();
        for split in Split::all(4) {
            let multi = multi_component_vector(&spec, &split, &s).unwrap();
            assert_eq!(multi.vector, formal, "split {:?}", split.cuts());
            if split.k() == 2 {
                let two = two_component_vector(&spec, &split, &s).unwrap();
                assert_eq!(two.vector, multi.vector);
            }
        }
        let local = local_structure_vector(&spec, &s).unwrap();
        assert_eq!(local.vector, formal);
        assert_eq!(local.terms, 6 * 2);
        assert_eq!(
            multi_component_vector(&spec, &Split::whole(4).unwrap(), &s)
                .unwrap()
                .terms,
            1
        );
    }

    #[test]
    fn single_occupancy_equals_full_for_singletons() {
        let spec = xxx(&[q(1, 3), q(-1, 2), q(0, 1), q(2, 1)]);
        let s = set(&[q(1, 4), q(-7, 5)]);
        let split = Split::singletons(4).unwrap();
        let full = multi_component_vector_with(
            &spec,
            &split,
            &s,
            PartitionEnumeration::Full,
            Strategy::Sequential,
        )
        .unwrap();
        let restricted = multi_component_vector_with(
            &spec,
            &split,
            &s,
            PartitionEnumeration::SingleOccupancy,
            Strategy::Sequential,
        )
        .unwrap();
        assert_eq!(full.vector, restricted.vector);
        assert_eq!((full.terms, restricted.terms), (16, 12));
        assert_eq!(
            full.vector,
            local_structure_vector(&spec, &s).unwrap().vector
        );
    }

    #[test]
    fn local_structure_single_site_weights() {
        let (x1, x2) = (q(1, 3), q(-1, 2));
        let spec = xxx(&[x1.clone(), x2.clone()]);
        let lambda = q(5, 2);
        let v = local_structure_vector(&spec, &set(std::slice::from_ref(&lambda)))
            .unwrap()
            .vector;
        let k = spec.kernel();
        // Down spin on site 1 is index 2, on site 2 index 1; B carries weight 1.
        assert_eq!(v.amplitudes()[2], k.delta(&lambda, &x2).unwrap());
        assert_eq!(v.amplitudes()[1], k.alpha(&lambda, &x1).unwrap());
    }

    #[test]
    fn homogeneous_closed_form() {
        let spec = ChainSpec::homogeneous(Kernel::Rational, 4, q(1, 3), Mode::Exact).unwrap();
        let s = set(&[q(2, 5), q(-3, 4)]);
        let closed = homogeneous_coordinate_vector(&spec, &s).unwrap();
        assert_eq!(
            closed.vector,
            local_structure_vector(&spec, &s).unwrap().vector
        );
        assert_eq!(closed.terms, 12);
        // δ(λ, ξ) = 0 at λ = ξ.
        assert_eq!(
            homogeneous_coordinate_vector(&spec, &set(&[q(1, 3)])),
            Err(Error::VanishingLocalEigenvalue(1))
        );
        let inhomogeneous = xxx(&[q(0, 1), q(1, 1)]);
        assert_eq!(
            homogeneous_coordinate_vector(&inhomogeneous, &set(&[q(1, 2)])),
            Err(Error::HomogeneousOnly)
        );
    }

    #[test]
    fn plane_wave_profile() {
        let spec = ChainSpec::homogeneous(Kernel::Rational, 5, q(0, 1), Mode::Exact).unwrap();
        let lambda = q(3, 2);
        let v = homogeneous_coordinate_vector(&spec, &set(std::slice::from_ref(&lambda)))
            .unwrap()
            .vector;
        let ratio = spec
            .alpha(&lambda, 1)
            .unwrap()
            .try_div(&spec.delta(&lambda, 1).unwrap())
            .unwrap();
        for site in 1..5 {
            let here = &v.amplitudes()[1 << (5 - site)];
            let next = &v.amplitudes()[1 << (5 - site - 1)];
            assert_eq!(next.try_div(here).unwrap(), ratio);
        }
    }

    #[test]
    fn xxz_reconstructions() {
        let kernel = Kernel::trigonometric(Complex64::new(0.3, 0.0)).unwrap();
        let spec = ChainSpec::new(
            kernel,
            vec![Scalar::real(0.1), Scalar::real(-0.2), Scalar::real(0.35)],
            Mode::Float,
        )
        .unwrap();
        let s = set(&[Scalar::complex(0.4, 0.2), Scalar::complex(-0.3, 0.5)]);
        let report = decomposition_report(&spec, &s, &Split::all(3), false);
        assert!(report.rows.iter().all(|r| r.error.is_none()));
        assert!(report.max_difference().unwrap() <= 1e-11, "{report:?}");
    }

    #[test]
    fn report_rows() {
        let spec = xxx(&[q(0, 1), q(1, 2), q(-2, 3), q(1, 5)]);
        let s = set(&[q(3, 7), q(-5, 2)]);
        let report = decomposition_report(&spec, &s, &[Split::at(4, 2).unwrap()], false);
        let names: Vec<_> = report.rows.iter().map(|r| r.formula.as_str()).collect();
        assert_eq!(
            names,
            ["two-component[2]", "multi-component[2]", "local-structure"]
        );
        assert_eq!(report.max_difference(), Some(0.0));

        let report = decomposition_report(&spec, &s, &[], true);
        let closed = report.rows.last().unwrap();
        assert_eq!(closed.formula, "homogeneous-closed-form");
        assert!(closed
            .error
            .as_deref()
            .unwrap()
            .contains("homogeneous only"));

        let homogeneous =
            ChainSpec::homogeneous(Kernel::Rational, 3, q(0, 1), Mode::Exact).unwrap();
        let report = decomposition_report(&homogeneous, &set(&[q(1, 2)]), &[], false);
        assert_eq!(report.rows.len(), 2);
    }
}
