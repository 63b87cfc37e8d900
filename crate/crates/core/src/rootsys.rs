//! Root systems of reduced Dynkin diagrams, parabolic data, and the
//! positive-root deficit `omega`.
//!
//! Nodes follow Bourbaki numbering within each connected component:
//!
//! * `A_l`: chain `1 - 2 - ... - l`.
//! * `B_l`: chain, node `l` is the unique short root.
//! * `C_l`: chain, node `l` is the unique long root; nodes `1..l-1` are short.
//! * `D_l`: chain `1 - ... - (l-2)` with `l-1` and `l` both attached to `l-2`.
//! * `E_l`: `1 - 3 - 4 - 5 - 6 (- 7 (- 8))` with node `2` attached to `4`.
//! * `F_4`: chain, nodes `1, 2` long and `3, 4` short.
//! * `G_2`: node `1` short, node `2` long.
//!
//! A diagram with several components numbers its nodes consecutively, so the
//! first node of the second component is `rank(first) + 1`.
//!
//! The Cartan matrix is stored as `cartan[i][j] = <alpha_j, alpha_i^vee>`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::IVec;
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("invalid Dynkin diagram: {0}")]
    InvalidDiagram(String),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("root inequality violated on {diagram} with Levi nodes {levi:?}: omega = {omega}")]
    InequalityViolated { diagram: String, levi: Vec<usize>, omega: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl RootType {
    pub fn from_letter(s: &str) -> Option<Self> {
        Some(match s.trim().to_ascii_uppercase().as_str() {
            "A" => RootType::A,
            "B" => RootType::B,
            "C" => RootType::C,
            "D" => RootType::D,
            "E" => RootType::E,
            "F" => RootType::F,
            "G" => RootType::G,
            _ => return None,
        })
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DynkinComponent {
    pub kind: RootType,
    pub rank: usize,
}

impl DynkinComponent {
    pub fn new(kind: RootType, rank: usize) -> Result<Self, RootError> {
        let ok = match kind {
            RootType::A => rank >= 1,
            RootType::B | RootType::C => rank >= 2,
            RootType::D => rank >= 4,
            RootType::E => (6..=8).contains(&rank),
            RootType::F => rank == 4,
            RootType::G => rank == 2,
        };
        if ok {
            Ok(DynkinComponent { kind, rank })
        } else {
            Err(RootError::InvalidDiagram(format!("{kind}{rank}")))
        }
    }

    /// Squared root lengths (short = 1) and edges, 0-based.
    fn shape(&self) -> (Vec<i64>, Vec<(usize, usize)>) {
        let l = self.rank;
        let chain: Vec<(usize, usize)> = (1..l).map(|i| (i - 1, i)).collect();
        match self.kind {
            RootType::A => (vec![1; l], chain),
            RootType::B => {
                let mut d = vec![2; l];
                d[l - 1] = 1;
                (d, chain)
            }
            RootType::C => {
                let mut d = vec![1; l];
                d[l - 1] = 2;
                (d, chain)
            }
            RootType::D => {
                let mut e: Vec<(usize, usize)> = (1..l - 1).map(|i| (i - 1, i)).collect();
                e.push((l - 3, l - 1));
                (vec![1; l], e)
            }
            RootType::E => {
                let mut e = vec![(0, 2), (1, 3), (2, 3)];
                e.extend((3..l - 1).map(|i| (i, i + 1)));
                (vec![1; l], e)
            }
            RootType::F => (vec![2, 2, 1, 1], chain),
            RootType::G => (vec![1, 3], chain),
        }
    }

    /// Cartan matrix of this component, `a[i][j] = <alpha_j, alpha_i^vee>`.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let (d, edges) = self.shape();
        let l = self.rank;
        let mut a = vec![vec![0i64; l]; l];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j) in &edges {
            let m = d[i].max(d[j]);
            a[i][j] = -m / d[i];
            a[j][i] = -m / d[j];
        }
        a
    }
}

impl fmt::Display for DynkinComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DynkinDiagram {
    pub components: Vec<DynkinComponent>,
}

impl DynkinDiagram {
    pub fn new(components: Vec<DynkinComponent>) -> Self {
        DynkinDiagram { components }
    }

    pub fn single(kind: RootType, rank: usize) -> Result<Self, RootError> {
        Ok(DynkinDiagram { components: vec![DynkinComponent::new(kind, rank)?] })
    }

    /// Parse `"A2"`, `"B3xA1"` or `"A1 A1"`; an empty string is the trivial diagram.
    pub fn parse(s: &str) -> Result<Self, RootError> {
        let mut components = Vec::new();
        for tok in s.split(|c: char| c == 'x' || c == '+' || c.is_whitespace()) {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let kind = RootType::from_letter(&tok[..1]).ok_or_else(|| RootError::InvalidDiagram(tok.to_string()))?;
            let rank: usize = tok[1..].parse().map_err(|_| RootError::InvalidDiagram(tok.to_string()))?;
            components.push(DynkinComponent::new(kind, rank)?);
        }
        Ok(DynkinDiagram { components })
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        let mut off = 0;
        for c in &self.components {
            let ca = c.cartan();
            for i in 0..c.rank {
                for j in 0..c.rank {
                    a[off + i][off + j] = ca[i][j];
                }
            }
            off += c.rank;
        }
        a
    }

    /// Every connected diagram of rank at most `max_rank`, in a fixed order.
    pub fn connected_up_to(max_rank: usize) -> Vec<DynkinComponent> {
        let mut out = Vec::new();
        for kind in [RootType::A, RootType::B, RootType::C, RootType::D, RootType::E, RootType::F, RootType::G] {
            for rank in 1..=max_rank {
                if let Ok(c) = DynkinComponent::new(kind, rank) {
                    out.push(c);
                }
            }
        }
        out
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("trivial");
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

/// Subset of the simple roots, as a bitmask over local node indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeSet(pub u64);

impl NodeSet {
    pub fn empty() -> Self {
        NodeSet(0)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices(it: impl IntoIterator<Item = usize>) -> Self {
        NodeSet(it.into_iter().fold(0u64, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn minus(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }
}

/// A parabolic subgroup, recorded by its Levi node set `I`. The colours of
/// the flag variety are the complement `C = S \ I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParabolicChoice {
    pub levi: NodeSet,
}

impl ParabolicChoice {
    pub fn new(levi: NodeSet) -> Self {
        ParabolicChoice { levi }
    }

    pub fn colours(&self, rs: &RootSystem) -> NodeSet {
        NodeSet::full(rs.rank()).minus(self.levi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    /// Human-readable type, e.g. `B3` or `A2xA1`.
    pub label: String,
    /// Global node ids (1-based) of the local nodes, used to bind colours.
    pub node_ids: Vec<usize>,
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots as coefficient vectors over the simple roots, sorted.
    pub positive_roots: Vec<IVec>,
    supports: Vec<NodeSet>,
}

/// Enumerate all positive roots of `diagram`.
pub fn build_root_system(diagram: &DynkinDiagram) -> Result<RootSystem, RootError> {
    for c in &diagram.components {
        DynkinComponent::new(c.kind, c.rank)?;
    }
    let n = diagram.rank();
    RootSystem::from_cartan(diagram.to_string(), (1..=n).collect(), diagram.cartan())
}

impl RootSystem {
    /// Build from a Cartan matrix of finite type by closing the simple roots
    /// under root strings.
    pub fn from_cartan(label: String, node_ids: Vec<usize>, cartan: Vec<Vec<i64>>) -> Result<Self, RootError> {
        let n = cartan.len();
        if n > 63 {
            return Err(RootError::InvalidDiagram("rank above 63".into()));
        }
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(RootError::InvalidDiagram("Cartan diagonal must be 2".into()));
            }
            for j in 0..n {
                if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(RootError::InvalidDiagram(format!("bad Cartan entry ({i},{j})")));
                }
            }
        }
        let pairing = |beta: &[i64], i: usize| -> i64 { (0..n).map(|j| beta[j] * cartan[i][j]).sum() };
        let mut known: HashSet<IVec> = HashSet::new();
        let mut layer: Vec<IVec> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        known.extend(layer.iter().cloned());
        while !layer.is_empty() {
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    // p = length of the alpha_i-string below beta
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if down[i] >= 0 && known.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - pairing(beta, i);
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            if known.len() > 10_000 {
                return Err(RootError::InvalidDiagram("Cartan matrix is not of finite type".into()));
            }
            layer = next;
        }
        let mut positive_roots: Vec<IVec> = known.into_iter().collect();
        positive_roots.sort();
        let supports = positive_roots.iter().map(|b| NodeSet::from_indices((0..n).filter(|&j| b[j] != 0))).collect();
        Ok(RootSystem { label, node_ids, cartan, positive_roots, supports })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// Local index of a global node id.
    pub fn local(&self, node: usize) -> Result<usize, RootError> {
        self.node_ids.iter().position(|&g| g == node).ok_or(RootError::UnknownNode(node))
    }

    /// `<beta, alpha_i^vee>` for an integer combination `beta` of simple roots.
    pub fn pairing(&self, beta: &[i64], i: usize) -> Result<i64, RootError> {
        if i >= self.rank() {
            return Err(RootError::UnknownNode(i));
        }
        Ok(self.pairing_unchecked(beta, i))
    }

    fn pairing_unchecked(&self, beta: &[i64], i: usize) -> i64 {
        beta.iter().zip(&self.cartan[i]).map(|(c, a)| c * a).sum()
    }

    /// Connected components of the diagram as node sets.
    pub fn components(&self) -> Vec<NodeSet> {
        let n = self.rank();
        let mut seen = NodeSet::empty();
        let mut out = Vec::new();
        for s in 0..n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = NodeSet::empty();
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                if comp.contains(v) {
                    continue;
                }
                comp.insert(v);
                for w in 0..n {
                    if w != v && self.cartan[v][w] != 0 && !comp.contains(w) {
                        stack.push(w);
                    }
                }
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    /// Positive roots not in the span of `levi`, i.e. `R+ \ R_I`.
    pub fn roots_outside(&self, levi: NodeSet) -> impl Iterator<Item = &IVec> + '_ {
        self.positive_roots.iter().zip(&self.supports).filter(move |(_, s)| !s.is_subset(levi)).map(|(b, _)| b)
    }

    /// Root subsystem on the given local nodes, keeping global node ids.
    pub fn restrict(&self, nodes: NodeSet) -> RootSystem {
        let idx: Vec<usize> = nodes.iter().filter(|&i| i < self.rank()).collect();
        let cartan = idx.iter().map(|&i| idx.iter().map(|&j| self.cartan[i][j]).collect()).collect();
        let ids: Vec<usize> = idx.iter().map(|&i| self.node_ids[i]).collect();
        let label = format!("{}|{{{}}}", self.label, ids.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        RootSystem::from_cartan(label, ids, cartan).expect("subdiagram of a finite type diagram is finite")
    }

    pub fn flag_dimension(&self, p: ParabolicChoice) -> usize {
        self.roots_outside(p.levi).count()
    }

    /// `b_alpha = sum over R+ \ R_I of <beta, alpha^vee>`, keyed by local node.
    pub fn b_coefficients(&self, p: ParabolicChoice) -> Result<BTreeMap<usize, i64>, RootError> {
        let colours = p.colours(self);
        let mut out: BTreeMap<usize, i64> = colours.iter().map(|a| (a, 0)).collect();
        for beta in self.roots_outside(p.levi) {
            for (a, b) in out.iter_mut() {
                *b += self.pairing_unchecked(beta, *a);
            }
        }
        if let Some((a, b)) = out.iter().find(|(_, b)| **b <= 0) {
            return Err(RootError::InternalInvariantViolation(format!(
                "b coefficient of node {} is {b}",
                self.node_ids[*a]
            )));
        }
        Ok(out)
    }

    /// `#C + #(R+ \ R_I) - sum_{alpha in C} b_alpha`.
    pub fn omega(&self, p: ParabolicChoice) -> i64 {
        let colours = p.colours(self);
        let mut total = colours.len() as i64;
        for beta in self.roots_outside(p.levi) {
            total += 1;
            for a in colours.iter() {
                total -= self.pairing_unchecked(beta, a);
            }
        }
        total
    }

    /// True iff `G/P` is a product of projective spaces, decided as `omega = 0`
    /// on every component.
    pub fn is_product_of_projective_spaces(&self, p: ParabolicChoice) -> bool {
        self.components().into_iter().all(|comp| {
            let sub = self.restrict(comp);
            let levi =
                NodeSet::from_indices(comp.iter().enumerate().filter(|(_, g)| p.levi.contains(*g)).map(|(l, _)| l));
            sub.omega(ParabolicChoice::new(levi)) == 0
        })
    }
}

/// One `(diagram, I)` pair with `omega(I) = 0` and `I` a proper subset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EqualityWitness {
    pub diagram: String,
    /// Levi nodes, 1-based.
    pub levi: Vec<usize>,
    /// Colour nodes `S \ I`, 1-based.
    pub colours: Vec<usize>,
    pub maximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeSummary {
    pub diagram: String,
    pub subsets: usize,
    pub equalities: usize,
    pub min_omega: i64,
    pub max_omega: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub max_rank: usize,
    pub diagrams: Vec<TypeSummary>,
    pub witnesses: Vec<EqualityWitness>,
    pub total_subsets: usize,
    pub violations: usize,
}

/// Check `omega(I) >= 0` for every connected diagram of rank `<= max_rank`
/// and every proper `I`, recording all equality cases.
pub fn verify_root_inequality(max_rank: usize, exec: Execution) -> Result<InequalityReport, RootError> {
    if max_rank == 0 {
        return Err(RootError::InvalidDiagram("max_rank must be positive".into()));
    }
    let comps = DynkinDiagram::connected_up_to(max_rank);
    let systems: Vec<RootSystem> =
        comps.iter().map(|c| build_root_system(&DynkinDiagram::new(vec![*c]))).collect::<Result<_, _>>()?;
    let jobs: Vec<(usize, u64)> = systems
        .iter()
        .enumerate()
        .flat_map(|(k, rs)| {
            let full = NodeSet::full(rs.rank()).0;
            (0..full).map(move |m| (k, m))
        })
        .collect();
    let omegas = par::map(exec, &jobs, |&(k, m)| systems[k].omega(ParabolicChoice::new(NodeSet(m))));

    let mut diagrams: Vec<TypeSummary> = comps
        .iter()
        .map(|c| TypeSummary {
            diagram: c.to_string(),
            subsets: 0,
            equalities: 0,
            min_omega: i64::MAX,
            max_omega: i64::MIN,
        })
        .collect();
    let mut witnesses = Vec::new();
    let mut first_violation = None;
    let mut violations = 0;
    for (&(k, m), &w) in jobs.iter().zip(&omegas) {
        let rs = &systems[k];
        let s = &mut diagrams[k];
        s.subsets += 1;
        s.min_omega = s.min_omega.min(w);
        s.max_omega = s.max_omega.max(w);
        let levi = NodeSet(m);
        let levi_ids: Vec<usize> = levi.iter().map(|i| rs.node_ids[i]).collect();
        if w < 0 {
            violations += 1;
            first_violation.get_or_insert(RootError::InequalityViolated {
                diagram: rs.label.clone(),
                levi: levi_ids.clone(),
                omega: w,
            });
        } else if w == 0 {
            s.equalities += 1;
            let colours = NodeSet::full(rs.rank()).minus(levi);
            witnesses.push(EqualityWitness {
                diagram: rs.label.clone(),
                levi: levi_ids,
                colours: colours.iter().map(|i| rs.node_ids[i]).collect(),
                maximal: colours.len() == 1,
            });
        }
    }
    if let Some(e) = first_violation {
        return Err(e);
    }
    Ok(InequalityReport { max_rank, diagrams, witnesses, total_subsets: jobs.len(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        build_root_system(&DynkinDiagram::parse(s).unwrap()).unwrap()
    }

    fn levi(rs: &RootSystem, nodes: &[usize]) -> ParabolicChoice {
        ParabolicChoice::new(NodeSet::from_indices(nodes.iter().map(|&n| rs.local(n).unwrap())))
    }

    #[test]
    fn rank_bounds() {
        assert!(DynkinDiagram::parse("B1").is_err());
        assert!(DynkinDiagram::parse("D3").is_err());
        assert!(DynkinDiagram::parse("E5").is_err());
        assert!(DynkinDiagram::parse("F3").is_err());
        assert!(DynkinDiagram::parse("G3").is_err());
        assert!(DynkinDiagram::parse("Q2").is_err());
        assert!(DynkinDiagram::parse("E8xA1").is_ok());
    }

    #[test]
    fn small_systems() {
        assert_eq!(rs("A1").positive_roots, vec![vec![1]]);
        assert_eq!(rs("A2").positive_roots, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(rs("G2").positive_roots.len(), 6);
    }

    #[test]
    fn bourbaki_c2_and_g2_entries() {
        let c2 = rs("C2");
        assert_eq!(c2.pairing(&[0, 1], 0).unwrap(), -2);
        assert_eq!(c2.pairing(&[1, 0], 1).unwrap(), -1);
        let g2 = rs("G2");
        assert_eq!(g2.cartan[0][1], -3);
        assert_eq!(g2.cartan[1][0], -1);
        let b3 = rs("B3");
        assert_eq!(b3.cartan[2][1], -2);
        assert_eq!(b3.cartan[1][2], -1);
    }

    #[test]
    fn pairing_examples() {
        let a2 = rs("A2");
        assert_eq!(a2.pairing(&[1, 0], 0).unwrap(), 2);
        assert_eq!(a2.pairing(&[1, 1], 0).unwrap(), 1);
        assert_eq!(a2.pairing(&[1, 1], 5), Err(RootError::UnknownNode(5)));
    }

    #[test]
    fn omega_and_b_examples() {
        let a2 = rs("A2");
        assert_eq!(a2.omega(levi(&a2, &[1, 2])), 0);
        assert_eq!(a2.omega(levi(&a2, &[2])), 0);
        assert_eq!(a2.omega(levi(&a2, &[])), 1);
        assert_eq!(a2.b_coefficients(levi(&a2, &[])).unwrap(), BTreeMap::from([(0, 2), (1, 2)]));
        assert_eq!(a2.b_coefficients(levi(&a2, &[2])).unwrap(), BTreeMap::from([(0, 3)]));
        assert_eq!(a2.flag_dimension(levi(&a2, &[2])), 2);
        assert_eq!(a2.flag_dimension(levi(&a2, &[])), 3);
        assert_eq!(a2.flag_dimension(levi(&a2, &[1, 2])), 0);
        let a1 = rs("A1");
        assert_eq!(a1.b_coefficients(levi(&a1, &[])).unwrap(), BTreeMap::from([(0, 2)]));
    }

    #[test]
    fn projective_space_test() {
        let a2 = rs("A2");
        assert!(a2.is_product_of_projective_spaces(levi(&a2, &[2])));
        assert!(!a2.is_product_of_projective_spaces(levi(&a2, &[])));
        assert!(a2.is_product_of_projective_spaces(levi(&a2, &[1, 2])));
        // P1 x P1
        let a1a1 = rs("A1xA1");
        assert!(a1a1.is_product_of_projective_spaces(levi(&a1a1, &[])));
        assert_eq!(a1a1.omega(levi(&a1a1, &[])), 0);
    }

    #[test]
    fn disconnected_omega_is_additive() {
        let x = rs("A2xB3");
        let a2 = rs("A2");
        let b3 = rs("B3");
        let lhs = x.omega(levi(&x, &[2, 4]));
        let rhs = a2.omega(levi(&a2, &[2])) + b3.omega(levi(&b3, &[2]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn restrict_keeps_global_ids() {
        let b3 = rs("B3");
        let sub = b3.restrict(NodeSet::from_indices([1, 2]));
        assert_eq!(sub.node_ids, vec![2, 3]);
        assert_eq!(sub.positive_roots.len(), 4); // B2
    }

    #[test]
    fn sweep_rank_two() {
        let rep = verify_root_inequality(2, Execution::Sequential).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.witnesses.iter().any(|w| w.diagram == "A1" && w.levi.is_empty()));
        assert!(rep.witnesses.iter().any(|w| w.diagram == "A2" && w.levi == vec![2]));
    }
}
