//! k-subsets of `{1..n}` and the lattice-diagram geometry of a pair `I|J`.
//!
//! Positions live in `Z_n` with labels `1..=n`; edge `i` goes from vertex
//! `i-1` to vertex `i`, and vertex `n` is vertex `0`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rim {
    n: usize,
    elements: Vec<usize>,
}

/// Cyclic label in `1..=n` for any integer position.
pub fn label(i: isize, n: usize) -> usize {
    let n = n as isize;
    ((i - 1).rem_euclid(n) + 1) as usize
}

impl Rim {
    pub fn new(n: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut elements: Vec<usize> = elements.into_iter().collect();
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidRim(format!("repeated element in {elements:?}")));
        }
        if let Some(&bad) = elements.iter().find(|&&e| e == 0 || e > n) {
            return Err(Error::InvalidRim(format!("{bad} is outside 1..={n}")));
        }
        if elements.is_empty() || elements.len() >= n {
            return Err(Error::InvalidRim(format!(
                "size {} must be strictly between 0 and {n}",
                elements.len()
            )));
        }
        Ok(Rim { n, elements })
    }

    /// Parses `"1,3,5"`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let elements = text
            .split(',')
            .map(|part| {
                part.trim().parse::<usize>().map_err(|_| Error::Parse {
                    what: "rim",
                    input: text.to_string(),
                    reason: format!("`{}` is not a positive integer", part.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Rim::new(n, elements)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Membership of a cyclic position.
    pub fn contains(&self, i: usize) -> bool {
        let i = label(i as isize, self.n);
        self.elements.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Rim {
        Rim {
            n: self.n,
            elements: (1..=self.n).filter(|&i| !self.contains(i)).collect(),
        }
    }

    /// Relabels `i -> i + shift`.
    pub fn rotate(&self, shift: isize) -> Rim {
        let mut elements: Vec<usize> = self
            .elements
            .iter()
            .map(|&i| label(i as isize + shift, self.n))
            .collect();
        elements.sort_unstable();
        Rim { n: self.n, elements }
    }

    pub fn peaks_valleys(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let mut peaks = BTreeSet::new();
        let mut valleys = BTreeSet::new();
        for i in 1..=self.n {
            match (self.contains(i), self.contains(i + 1)) {
                (false, true) => {
                    peaks.insert(i);
                }
                (true, false) => {
                    valleys.insert(i);
                }
                _ => {}
            }
        }
        (peaks, valleys)
    }
}

impl fmt::Display for Rim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A pair of rims `I|J`; `L_J` is the submodule layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    pub i: Rim,
    pub j: Rim,
}

impl Profile {
    pub fn new(i: Rim, j: Rim) -> Result<Self> {
        check_pair(&i, &j)?;
        Ok(Profile { i, j })
    }

    /// Parses `"1,3,5|2,4,6"`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let (a, b) = text.split_once('|').ok_or_else(|| Error::Parse {
            what: "profile",
            input: text.to_string(),
            reason: "expected `I|J`".to_string(),
        })?;
        Profile::new(Rim::parse(a, n)?, Rim::parse(b, n)?)
    }

    pub fn n(&self) -> usize {
        self.i.n()
    }

    pub fn k(&self) -> usize {
        self.i.k()
    }

    pub fn rotate(&self, shift: isize) -> Profile {
        Profile {
            i: self.i.rotate(shift),
            j: self.j.rotate(shift),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.i, self.j)
    }
}

fn check_pair(i: &Rim, j: &Rim) -> Result<()> {
    if i.n() != j.n() || i.k() != j.k() {
        return Err(Error::MismatchedRims);
    }
    Ok(())
}

/// Membership class of an edge with respect to `I|J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// `i ∈ I \ J`
    OnlyI,
    /// `i ∈ J \ I`
    OnlyJ,
    /// `i ∈ I ∩ J`
    Both,
    /// `i ∉ I ∪ J`
    Neither,
}

pub fn edge_kind(i: &Rim, j: &Rim, e: usize) -> EdgeKind {
    match (i.contains(e), j.contains(e)) {
        (true, false) => EdgeKind::OnlyI,
        (false, true) => EdgeKind::OnlyJ,
        (true, true) => EdgeKind::Both,
        (false, false) => EdgeKind::Neither,
    }
}

pub fn interlacing_number(i: &Rim, j: &Rim) -> Result<usize> {
    check_pair(i, j)?;
    let word: Vec<bool> = (1..=i.n())
        .filter_map(|e| match edge_kind(i, j, e) {
            EdgeKind::OnlyI => Some(true),
            EdgeKind::OnlyJ => Some(false),
            _ => None,
        })
        .collect();
    let len = word.len();
    Ok((0..len)
        .filter(|&p| word[p] && !word[(p + len - 1) % len])
        .count())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedProfile {
    pub i: Rim,
    pub j: Rim,
    /// `index_map[p - 1]` is the original label of reduced position `p`.
    pub index_map: Vec<usize>,
}

pub fn reduce_profile(i: &Rim, j: &Rim) -> Result<ReducedProfile> {
    check_pair(i, j)?;
    if i == j {
        return Err(Error::DegenerateProfile);
    }
    let index_map: Vec<usize> = (1..=i.n())
        .filter(|&e| matches!(edge_kind(i, j, e), EdgeKind::OnlyI | EdgeKind::OnlyJ))
        .collect();
    let n2 = index_map.len();
    let pick = |rim: &Rim| {
        index_map
            .iter()
            .enumerate()
            .filter(|(_, &e)| rim.contains(e))
            .map(|(p, _)| p + 1)
            .collect::<Vec<_>>()
    };
    Ok(ReducedProfile {
        i: Rim::new(n2, pick(i))?,
        j: Rim::new(n2, pick(j))?,
        index_map,
    })
}

/// One region between consecutive meeting points of the two rims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxInfo {
    /// Branching point where the box starts (exclusive).
    pub start: usize,
    /// Branching point where the box ends.
    pub end: usize,
    /// First edge of the box, an element of `J \ I`.
    pub j_start: usize,
    /// Edges of `I Δ J` inside the box, in cyclic order.
    pub edges: Vec<usize>,
    /// Number of elements of `I \ J` in the box.
    pub size: usize,
    /// Leading run of `J \ I` edges.
    pub rising: Vec<usize>,
    /// Trailing run of `I \ J` edges, ending at `end`.
    pub falling: Vec<usize>,
    /// Valleys of `I` strictly inside the box.
    pub junctions: Vec<usize>,
    /// Vertex at the top of the leading run, in `0..n`.
    pub peak_vertex: usize,
}

impl BoxInfo {
    pub fn is_squared(&self) -> bool {
        self.rising.len() == self.size && self.falling.len() == self.size
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileGeometry {
    pub i: Rim,
    pub j: Rim,
    pub reduced: ReducedProfile,
    pub r: usize,
    pub r1: usize,
    /// `i_1, ..., i_{r1}` in original labels, anchored as described in
    /// [`profile_geometry`].
    pub branching_i: Vec<usize>,
    /// `j_1, ..., j_{r1}`; `j_g` starts the box that follows `i_g`.
    pub branching_j: Vec<usize>,
    pub junctions: Vec<usize>,
    pub box_sizes: Vec<usize>,
    /// Box `g` runs from `i_g` to `i_{g+1}`.
    pub boxes: Vec<BoxInfo>,
}

impl ProfileGeometry {
    pub fn poset_exponent(&self) -> usize {
        self.r1
    }

    pub fn n(&self) -> usize {
        self.i.n()
    }

    pub fn k(&self) -> usize {
        self.i.k()
    }

    pub fn common(&self) -> usize {
        self.i.elements().iter().filter(|&&e| self.j.contains(e)).count()
    }

    pub fn is_tight(&self) -> bool {
        self.r1 == self.r && self.common() == self.k() - self.r
    }

    pub fn all_squared(&self) -> bool {
        self.boxes.iter().all(BoxInfo::is_squared)
    }

    /// `min(l_{g-1}, l_g)`, the threshold attached to branching point `g`.
    pub fn threshold(&self, g: usize) -> usize {
        let prev = (g + self.r1 - 1) % self.r1;
        self.box_sizes[prev].min(self.box_sizes[g])
    }

    /// The box ending at branching point `g`.
    pub fn box_before(&self, g: usize) -> &BoxInfo {
        &self.boxes[(g + self.r1 - 1) % self.r1]
    }
}

/// Computes boxes, branching points and junctions.
///
/// The walk runs on the reduced profile. The gap between the rims (with `J`
/// placed as high as possible below `I`) drops by one on an `I \ J` edge and
/// rises by one on a `J \ I` edge; branching points are the `I \ J` edges
/// where the gap returns to zero.
///
/// Origin: `i_1` is chosen so that `(l_1, ..., l_{r1})` is the
/// lexicographically smallest rotation of the box sizes, and among equal
/// rotations the smallest original label wins.
pub fn profile_geometry(i: &Rim, j: &Rim) -> Result<ProfileGeometry> {
    let reduced = reduce_profile(i, j)?;
    let r = interlacing_number(i, j)?;
    let n2 = reduced.index_map.len();
    let is_i: Vec<bool> = (1..=n2).map(|p| reduced.i.contains(p)).collect();

    // s[p] for vertices p = 0..n2
    let mut s = vec![0isize; n2 + 1];
    for p in 1..=n2 {
        s[p] = s[p - 1] + if is_i[p - 1] { 1 } else { -1 };
    }
    let top = *s.iter().max().expect("nonempty");
    let gap = |p: usize| top - s[p % n2];

    // reduced positions of branching points, ascending
    let ends: Vec<usize> = (1..=n2).filter(|&p| is_i[p - 1] && gap(p) == 0).collect();
    let r1 = ends.len();
    if r1 == 0 {
        return Err(Error::Internal("no meeting point found".into()));
    }

    let orig = |p: usize| reduced.index_map[(p - 1) % n2];
    let mut raw_boxes = Vec::with_capacity(r1);
    for g in 0..r1 {
        let start = ends[g];
        let end = ends[(g + 1) % r1];
        let mut positions = Vec::new();
        let mut p = start % n2 + 1;
        loop {
            positions.push(p);
            if p == end {
                break;
            }
            p = p % n2 + 1;
        }
        let size = positions.iter().filter(|&&p| is_i[p - 1]).count();
        let rising: Vec<usize> = positions
            .iter()
            .take_while(|&&p| !is_i[p - 1])
            .copied()
            .collect();
        let falling: Vec<usize> = {
            let mut f: Vec<usize> = positions
                .iter()
                .rev()
                .take_while(|&&p| is_i[p - 1])
                .copied()
                .collect();
            f.reverse();
            f
        };
        let junctions: Vec<usize> = positions
            .iter()
            .filter(|&&p| p != end && is_i[p - 1] && !is_i[p % n2])
            .map(|&p| orig(p))
            .collect();
        let peak_vertex = orig(*rising.last().expect("box starts in J \\ I")) % i.n();
        raw_boxes.push(BoxInfo {
            start: orig(start),
            end: orig(end),
            j_start: orig(positions[0]),
            edges: positions.iter().map(|&p| orig(p)).collect(),
            size,
            rising: rising.iter().map(|&p| orig(p)).collect(),
            falling: falling.iter().map(|&p| orig(p)).collect(),
            junctions,
            peak_vertex,
        });
    }

    let sizes: Vec<usize> = raw_boxes.iter().map(|b| b.size).collect();
    let rotated = |shift: usize| -> Vec<usize> { (0..r1).map(|g| sizes[(g + shift) % r1]).collect() };
    let shift = (0..r1)
        .min_by(|&a, &b| {
            rotated(a)
                .cmp(&rotated(b))
                .then(raw_boxes[a].start.cmp(&raw_boxes[b].start))
        })
        .expect("r1 > 0");
    let boxes: Vec<BoxInfo> = (0..r1).map(|g| raw_boxes[(g + shift) % r1].clone()).collect();

    Ok(ProfileGeometry {
        i: i.clone(),
        j: j.clone(),
        r,
        r1,
        branching_i: boxes.iter().map(|b| b.start).collect(),
        branching_j: boxes.iter().map(|b| b.j_start).collect(),
        junctions: boxes.iter().flat_map(|b| b.junctions.clone()).collect(),
        box_sizes: boxes.iter().map(|b| b.size).collect(),
        boxes,
        reduced,
    })
}

pub fn is_almost_tightly_3_interlacing(i: &Rim, j: &Rim) -> bool {
    match profile_geometry(i, j) {
        Ok(g) => {
            g.r1 == 3 && g.all_squared() && g.box_sizes.iter().filter(|&&l| l == 1).count() >= 2
        }
        Err(_) => false,
    }
}

/// All k-subsets of `{1..n}` in lexicographic order.
pub fn all_rims(k: usize, n: usize) -> Vec<Rim> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Rim>) {
        if cur.len() == k {
            out.push(Rim {
                n,
                elements: cur.clone(),
            });
            return;
        }
        for e in start..=n {
            if n - e + 1 < k - cur.len() {
                break;
            }
            cur.push(e);
            rec(e + 1, k, n, cur, out);
            cur.pop();
        }
    }
    if k > 0 && k < n {
        rec(1, k, n, &mut current, &mut out);
    }
    out
}

/// Smallest representative of `I|J` under simultaneous rotation.
pub fn canonical_rotation(p: &Profile) -> (Profile, usize) {
    (0..p.n())
        .map(|s| (p.rotate(-(s as isize)), s))
        .min_by(|a, b| {
            (a.0.i.elements(), a.0.j.elements()).cmp(&(b.0.i.elements(), b.0.j.elements()))
        })
        .expect("n > 0")
}

/// Profiles up to rotation whose diagram has at least `min_boxes` boxes.
pub fn enumerate_profiles(k: usize, n: usize, min_boxes: usize) -> Vec<Profile> {
    let rims = all_rims(k, n);
    let mut out = Vec::new();
    for a in &rims {
        for b in &rims {
            if a == b {
                continue;
            }
            let p = Profile {
                i: a.clone(),
                j: b.clone(),
            };
            if canonical_rotation(&p).0 != p {
                continue;
            }
            if profile_geometry(a, b).is_ok_and(|g| g.r1 >= min_boxes) {
                out.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rim(n: usize, e: &[usize]) -> Rim {
        Rim::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn peaks_and_valleys() {
        let (p, v) = rim(8, &[1, 4, 5]).peaks_valleys();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![3, 8]);
        assert_eq!(v.into_iter().collect::<Vec<_>>(), vec![1, 5]);
        let (p, v) = rim(8, &[1, 2, 3]).peaks_valleys();
        assert_eq!((p.len(), v.len()), (1, 1));
        assert!(p.contains(&8) && v.contains(&3));
        let (p, v) = rim(8, &[2, 4, 7, 8]).peaks_valleys();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![1, 3, 6]);
        assert_eq!(v.into_iter().collect::<Vec<_>>(), vec![2, 4, 8]);
    }

    #[test]
    fn interlacing_examples() {
        assert_eq!(interlacing_number(&rim(6, &[1, 3, 5]), &rim(6, &[2, 4, 6])).unwrap(), 3);
        assert_eq!(
            interlacing_number(&rim(8, &[1, 3, 5, 7]), &rim(8, &[2, 4, 6, 8])).unwrap(),
            4
        );
        assert_eq!(interlacing_number(&rim(6, &[1, 3, 5]), &rim(6, &[1, 3, 5])).unwrap(), 0);
        assert_eq!(
            interlacing_number(&rim(6, &[1, 3, 5]), &rim(7, &[2, 4, 6])),
            Err(Error::MismatchedRims)
        );
    }

    #[test]
    fn reduction_drops_parallel_segments() {
        let red = reduce_profile(&rim(8, &[1, 2, 5]), &rim(8, &[2, 3, 6])).unwrap();
        assert_eq!(red.index_map, vec![1, 3, 5, 6]);
        assert_eq!(red.i.elements(), &[1, 3]);
        assert_eq!(red.j.elements(), &[2, 4]);
        assert_eq!(
            reduce_profile(&rim(6, &[1, 3, 5]), &rim(6, &[1, 3, 5])),
            Err(Error::DegenerateProfile)
        );
    }

    #[test]
    fn geometry_of_named_profiles() {
        let g = profile_geometry(&rim(8, &[2, 4, 7, 8]), &rim(8, &[1, 3, 5, 6])).unwrap();
        assert_eq!((g.r1, g.box_sizes.clone()), (3, vec![1, 1, 2]));
        assert_eq!(g.branching_i, vec![8, 2, 4]);
        assert_eq!(g.branching_j, vec![1, 3, 5]);

        let g = profile_geometry(&rim(10, &[1, 2, 5, 6, 8]), &rim(10, &[3, 4, 7, 9, 10])).unwrap();
        assert_eq!((g.r1, g.box_sizes.clone()), (3, vec![1, 2, 2]));
        assert_eq!(g.branching_i, vec![6, 8, 2]);
        assert_eq!(g.branching_j, vec![7, 9, 3]);
        assert!(g.junctions.is_empty());

        let g = profile_geometry(&rim(8, &[1, 3, 5, 7]), &rim(8, &[2, 4, 6, 8])).unwrap();
        assert_eq!((g.r, g.r1, g.box_sizes.clone()), (4, 4, vec![1, 1, 1, 1]));
        assert!(g.junctions.is_empty() && g.is_tight());
        assert_eq!(g.branching_i, vec![1, 3, 5, 7]);
        assert_eq!(g.boxes[3].peak_vertex, 0);
    }

    #[test]
    fn junction_box() {
        let i = rim(12, &[2, 4, 6, 9, 11, 12]);
        let j = rim(12, &[1, 3, 5, 7, 8, 10]);
        let g = profile_geometry(&i, &j).unwrap();
        assert_eq!((g.r, g.r1), (5, 4));
        assert_eq!(g.junctions, vec![9]);
        assert_eq!(g.box_sizes, vec![1, 1, 1, 3]);
    }

    #[test]
    fn almost_tight_predicate() {
        assert!(is_almost_tightly_3_interlacing(&rim(8, &[2, 4, 7, 8]), &rim(8, &[1, 3, 5, 6])));
        assert!(is_almost_tightly_3_interlacing(&rim(6, &[1, 3, 5]), &rim(6, &[2, 4, 6])));
        assert!(!is_almost_tightly_3_interlacing(
            &rim(10, &[1, 2, 5, 6, 8]),
            &rim(10, &[3, 4, 7, 9, 10])
        ));
    }

    #[test]
    fn profile_enumeration_up_to_rotation() {
        let p = enumerate_profiles(3, 6, 3);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].to_string(), "1,3,5|2,4,6");
    }
}
