use std::collections::BTreeMap;
use std::fmt;

/// Identifier of a tile within one tiling system. Ids are dense small
/// integers assigned by the system builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TileId(pub u32);

impl TileId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A tile of the alphabet. `layers` carries the per-component labels when the
/// tile was produced by layering systems together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub id: TileId,
    pub label: String,
    pub layers: Option<Vec<String>>,
}

impl Tile {
    pub fn new(id: u32, label: impl Into<String>) -> Self {
        Tile { id: TileId(id), label: label.into(), layers: None }
    }
}

/// A sorted, duplicate-free set of tile ids constraining one pattern cell.
///
/// A cell holding several tiles stands for the family of concrete patterns
/// obtained by choosing one tile for that cell; this keeps rules lifted from
/// a layered component compact instead of materializing the expansion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TileChoice {
    ids: Vec<TileId>,
}

impl TileChoice {
    pub fn single(id: TileId) -> Self {
        TileChoice { ids: vec![id] }
    }

    pub fn from_ids(ids: impl IntoIterator<Item = TileId>) -> Self {
        let mut v: Vec<TileId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        TileChoice { ids: v }
    }

    pub fn ids(&self) -> &[TileId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: TileId) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    /// Set intersection; empty result means no tile can satisfy the cell.
    pub fn intersect(&self, other: &TileChoice) -> TileChoice {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ids.len() && j < other.ids.len() {
            match self.ids[i].cmp(&other.ids[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.ids[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        TileChoice { ids: out }
    }

    /// Singleton accessor, for patterns known to be concrete.
    pub fn as_single(&self) -> Option<TileId> {
        if self.ids.len() == 1 {
            Some(self.ids[0])
        } else {
            None
        }
    }
}

/// Offset of a pattern cell relative to the pattern anchor.
pub type Offset = (i32, i32);

/// A finite partial constraint: a map from offsets to tile choices. Supports
/// are normalized so the minimum dx and dy are both 0, making equality
/// canonical under translation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pattern {
    cells: BTreeMap<Offset, TileChoice>,
}

impl Pattern {
    /// Build a concrete pattern from (offset, tile) pairs. Duplicate offsets
    /// keep the intersection of their demands.
    pub fn new(cells: impl IntoIterator<Item = (Offset, TileId)>) -> Pattern {
        Pattern::with_choices(
            cells
                .into_iter()
                .map(|(o, t)| (o, TileChoice::single(t))),
        )
    }

    /// Build a pattern whose cells carry arbitrary tile sets.
    pub fn with_choices(cells: impl IntoIterator<Item = (Offset, TileChoice)>) -> Pattern {
        let mut map: BTreeMap<Offset, TileChoice> = BTreeMap::new();
        for (o, c) in cells {
            match map.remove(&o) {
                None => {
                    map.insert(o, c);
                }
                Some(prev) => {
                    map.insert(o, prev.intersect(&c));
                }
            }
        }
        let mut p = Pattern { cells: map };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        if self.cells.is_empty() {
            return;
        }
        let min_dx = self.cells.keys().map(|&(dx, _)| dx).min().unwrap();
        let min_dy = self.cells.keys().map(|&(_, dy)| dy).min().unwrap();
        if min_dx == 0 && min_dy == 0 {
            return;
        }
        let shifted: BTreeMap<Offset, TileChoice> = std::mem::take(&mut self.cells)
            .into_iter()
            .map(|((dx, dy), c)| ((dx - min_dx, dy - min_dy), c))
            .collect();
        self.cells = shifted;
    }

    pub fn cells(&self) -> impl Iterator<Item = (Offset, &TileChoice)> {
        self.cells.iter().map(|(&o, c)| (o, c))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Width of the support in cells (max dx + 1 after normalization).
    pub fn width(&self) -> u32 {
        self.cells
            .keys()
            .map(|&(dx, _)| dx as u32 + 1)
            .max()
            .unwrap_or(0)
    }

    /// Height of the support in cells.
    pub fn height(&self) -> u32 {
        self.cells
            .keys()
            .map(|&(_, dy)| dy as u32 + 1)
            .max()
            .unwrap_or(0)
    }

    /// True when some cell's choice set is empty (no concrete instance).
    pub fn has_empty_cell(&self) -> bool {
        self.cells.values().any(|c| c.is_empty())
    }

    /// Translate every tile id through `f` (used when retagging alphabets).
    pub fn map_ids(&self, mut f: impl FnMut(TileId) -> TileId) -> Pattern {
        Pattern {
            cells: self
                .cells
                .iter()
                .map(|(&o, c)| (o, TileChoice::from_ids(c.ids().iter().map(|&t| f(t)))))
                .collect(),
        }
    }

    /// Apply an affine remap to the cell offsets (used for re-orientations
    /// such as the diagonal shear between determinism conventions).
    pub fn map_offsets(&self, mut f: impl FnMut(Offset) -> Offset) -> Pattern {
        Pattern::with_choices(self.cells.iter().map(|(&o, c)| (f(o), c.clone())))
    }
}

/// Reduce a pattern's offsets modulo a horizontal period `px` and/or a
/// vertical period `py`. Cells that collide after reduction intersect their
/// demands; `None` means the collision is contradictory, so the pattern can
/// never occur in a configuration with that periodicity.
pub fn reduce_pattern_mod(pat: &Pattern, px: Option<u32>, py: Option<u32>) -> Option<Pattern> {
    let reduce = |v: i32, m: Option<u32>| -> i32 {
        match m {
            Some(m) => v.rem_euclid(m as i32),
            None => v,
        }
    };
    let mut map: BTreeMap<Offset, TileChoice> = BTreeMap::new();
    for ((dx, dy), choice) in pat.cells.iter() {
        let key = (reduce(*dx, px), reduce(*dy, py));
        match map.remove(&key) {
            None => {
                map.insert(key, choice.clone());
            }
            Some(prev) => {
                let merged = prev.intersect(choice);
                if merged.is_empty() {
                    return None;
                }
                map.insert(key, merged);
            }
        }
    }
    let mut p = Pattern { cells: map };
    p.normalize();
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u32) -> TileId {
        TileId(n)
    }

    #[test]
    fn normalization_shifts_to_origin() {
        let p = Pattern::new([((2, 3), t(0)), ((4, 3), t(1))]);
        let offsets: Vec<Offset> = p.cells().map(|(o, _)| o).collect();
        assert_eq!(offsets, vec![(0, 0), (2, 0)]);
        assert_eq!(p.width(), 3);
        assert_eq!(p.height(), 1);
    }

    #[test]
    fn reduce_merges_congruent_equal_cells() {
        let p = Pattern::new([((0, 0), t(0)), ((2, 0), t(0))]);
        let r = reduce_pattern_mod(&p, Some(2), None).unwrap();
        assert_eq!(r, Pattern::new([((0, 0), t(0))]));
    }

    #[test]
    fn reduce_conflicting_cells_is_unsatisfiable() {
        let p = Pattern::new([((0, 0), t(0)), ((2, 0), t(1))]);
        assert_eq!(reduce_pattern_mod(&p, Some(2), None), None);
    }

    #[test]
    fn reduce_without_collision_is_identity() {
        let p = Pattern::new([((0, 0), t(0)), ((1, 0), t(1))]);
        assert_eq!(reduce_pattern_mod(&p, Some(3), None), Some(p));
    }

    #[test]
    fn reduce_is_idempotent() {
        let p = Pattern::new([((0, 0), t(0)), ((3, 1), t(1)), ((1, 4), t(0))]);
        let once = reduce_pattern_mod(&p, Some(2), Some(3)).unwrap();
        let twice = reduce_pattern_mod(&once, Some(2), Some(3)).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn choice_intersection() {
        let a = TileChoice::from_ids([t(0), t(1), t(3)]);
        let b = TileChoice::from_ids([t(1), t(2), t(3)]);
        assert_eq!(a.intersect(&b), TileChoice::from_ids([t(1), t(3)]));
    }
}
