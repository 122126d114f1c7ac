use std::fmt;

use super::pattern::{Pattern, Tile, TileChoice, TileId};
use crate::error::CoreError;

/// A tiling system: a finite tile alphabet plus a finite set of forbidden
/// patterns over finite supports. An assignment of tiles to the plane is
/// valid when no forbidden pattern occurs anywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingSystem {
    tiles: Vec<Tile>,
    forbidden: Vec<Pattern>,
}

impl TilingSystem {
    /// Build a system without validation; `validate_system` reports breaches.
    pub fn new(tiles: Vec<Tile>, forbidden: Vec<Pattern>) -> Self {
        TilingSystem { tiles, forbidden }
    }

    /// Convenience constructor: tiles named by label, ids in list order.
    pub fn from_labels<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        forbidden: Vec<Pattern>,
    ) -> Self {
        let tiles = labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| Tile::new(i as u32, l))
            .collect();
        TilingSystem { tiles, forbidden }
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn forbidden(&self) -> &[Pattern] {
        &self.forbidden
    }

    pub fn tile(&self, id: TileId) -> Option<&Tile> {
        self.tiles.iter().find(|t| t.id == id)
    }

    pub fn tile_by_label(&self, label: &str) -> Option<&Tile> {
        self.tiles.iter().find(|t| t.label == label)
    }

    pub fn contains_tile(&self, id: TileId) -> bool {
        self.tile(id).is_some()
    }

    /// Largest pattern width over the forbidden set; 1 when there are no
    /// patterns (a ruleless system still has radius 1 by convention).
    pub fn hwidth(&self) -> u32 {
        self.forbidden.iter().map(|p| p.width()).max().unwrap_or(1).max(1)
    }

    /// Largest pattern height over the forbidden set, at least 1.
    pub fn vheight(&self) -> u32 {
        self.forbidden.iter().map(|p| p.height()).max().unwrap_or(1).max(1)
    }

    /// Radius of action: the larger of `hwidth` and `vheight`.
    pub fn radius(&self) -> u32 {
        self.hwidth().max(self.vheight())
    }

    /// Number of layers declared by the tiles (arity of their label tuples),
    /// or 1 when tiles carry no layer decomposition.
    pub fn layer_count(&self) -> usize {
        self.tiles
            .iter()
            .find_map(|t| t.layers.as_ref().map(|l| l.len()))
            .unwrap_or(1)
    }

    pub fn push_forbidden(&mut self, p: Pattern) {
        self.forbidden.push(p);
    }
}

/// One well-formedness breach found by `validate_system`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    NoTiles,
    DuplicateTileId { id: TileId },
    EmptyPattern { pattern: usize },
    UnknownTile { pattern: usize, id: TileId },
    UnsatisfiableCell { pattern: usize },
    LayerArityMismatch { tile: TileId, got: usize, expected: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoTiles => write!(f, "system declares no tiles"),
            Diagnostic::DuplicateTileId { id } => write!(f, "duplicate tile id {id}"),
            Diagnostic::EmptyPattern { pattern } => {
                write!(f, "forbidden pattern #{pattern} is empty")
            }
            Diagnostic::UnknownTile { pattern, id } => {
                write!(f, "forbidden pattern #{pattern} references unknown tile id {id}")
            }
            Diagnostic::UnsatisfiableCell { pattern } => {
                write!(f, "forbidden pattern #{pattern} has a cell with an empty tile choice")
            }
            Diagnostic::LayerArityMismatch { tile, got, expected } => {
                write!(f, "tile {tile} declares {got} layers, system uses {expected}")
            }
        }
    }
}

/// Check every type invariant of the system and report each breach.
/// An empty result means the system is well-formed.
pub fn validate_system(sys: &TilingSystem) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if sys.tiles().is_empty() {
        out.push(Diagnostic::NoTiles);
    }
    let mut seen = std::collections::BTreeSet::new();
    for t in sys.tiles() {
        if !seen.insert(t.id) {
            out.push(Diagnostic::DuplicateTileId { id: t.id });
        }
    }
    let arity = sys.layer_count();
    for t in sys.tiles() {
        if let Some(layers) = &t.layers {
            if layers.len() != arity {
                out.push(Diagnostic::LayerArityMismatch {
                    tile: t.id,
                    got: layers.len(),
                    expected: arity,
                });
            }
        }
    }
    for (i, p) in sys.forbidden().iter().enumerate() {
        if p.is_empty() {
            out.push(Diagnostic::EmptyPattern { pattern: i });
            continue;
        }
        if p.has_empty_cell() {
            out.push(Diagnostic::UnsatisfiableCell { pattern: i });
        }
        for (_, choice) in p.cells() {
            for &id in choice.ids() {
                if !sys.contains_tile(id) {
                    out.push(Diagnostic::UnknownTile { pattern: i, id });
                }
            }
        }
    }
    out
}

/// Turn allowed-adjacency rule sets into the internal forbidden-pair form:
/// every ordered pair absent from `allowed_h` (left, right) or `allowed_v`
/// (bottom, top) becomes a forbidden two-cell pattern.
pub fn forbidden_from_allowed_pairs(
    tiles: &[Tile],
    allowed_h: &[(TileId, TileId)],
    allowed_v: &[(TileId, TileId)],
) -> Vec<Pattern> {
    use std::collections::BTreeSet;
    let hset: BTreeSet<_> = allowed_h.iter().copied().collect();
    let vset: BTreeSet<_> = allowed_v.iter().copied().collect();
    let mut out = Vec::new();
    for a in tiles {
        for b in tiles {
            if !hset.contains(&(a.id, b.id)) {
                out.push(Pattern::new([((0, 0), a.id), ((1, 0), b.id)]));
            }
            if !vset.contains(&(a.id, b.id)) {
                out.push(Pattern::new([((0, 0), a.id), ((0, 1), b.id)]));
            }
        }
    }
    out
}

/// Helper describing the product structure built by `layer_product`.
#[derive(Debug, Clone)]
pub struct LayerIndex {
    sizes: Vec<usize>,
    strides: Vec<usize>,
}

impl LayerIndex {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut strides = vec![1usize; sizes.len()];
        for k in (0..sizes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * sizes[k + 1];
        }
        LayerIndex { sizes, strides }
    }

    pub fn layer_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Tuple id from per-layer indices.
    pub fn pack(&self, coords: &[usize]) -> TileId {
        debug_assert_eq!(coords.len(), self.sizes.len());
        let mut id = 0usize;
        for (k, &c) in coords.iter().enumerate() {
            id += c * self.strides[k];
        }
        TileId(id as u32)
    }

    /// Per-layer index of tuple `id` at layer `k`.
    pub fn coord(&self, id: TileId, k: usize) -> usize {
        (id.index() / self.strides[k]) % self.sizes[k]
    }

    /// All tuple ids whose layer-`k` coordinate lies in `allowed`.
    pub fn lift(&self, k: usize, allowed: &[usize]) -> TileChoice {
        let mut ids = Vec::new();
        for id in 0..self.total() {
            let c = (id / self.strides[k]) % self.sizes[k];
            if allowed.contains(&c) {
                ids.push(TileId(id as u32));
            }
        }
        TileChoice::from_ids(ids)
    }

    /// Tuple ids satisfying an arbitrary per-coordinate predicate.
    pub fn select(&self, mut pred: impl FnMut(&[usize]) -> bool) -> TileChoice {
        let n = self.layer_count();
        let mut coords = vec![0usize; n];
        let mut ids = Vec::new();
        for id in 0..self.total() {
            let mut rest = id;
            for k in 0..n {
                coords[k] = rest / self.strides[k];
                rest %= self.strides[k];
            }
            if pred(&coords) {
                ids.push(TileId(id as u32));
            }
        }
        TileChoice::from_ids(ids)
    }
}

/// Cartesian product of several systems. The tile set is the product of the
/// component alphabets; the forbidden set is every component's patterns
/// lifted to tuples (free on the other coordinates) plus the given coupling
/// patterns, which must already speak about tuple tiles.
pub fn layer_product(
    systems: &[TilingSystem],
    coupling: &[Pattern],
) -> Result<TilingSystem, CoreError> {
    assert!(!systems.is_empty(), "layer_product needs at least one system");
    let sizes: Vec<usize> = systems.iter().map(|s| s.tile_count()).collect();
    let idx = LayerIndex::new(sizes);
    let total = idx.total();

    let mut tiles = Vec::with_capacity(total);
    for id in 0..total {
        let mut labels = Vec::with_capacity(systems.len());
        for (k, sys) in systems.iter().enumerate() {
            let c = idx.coord(TileId(id as u32), k);
            labels.push(sys.tiles()[c].label.clone());
        }
        let label = labels.join("|");
        tiles.push(Tile {
            id: TileId(id as u32),
            label,
            layers: Some(labels),
        });
    }

    let mut forbidden = Vec::new();
    for (k, sys) in systems.iter().enumerate() {
        // Position of each component tile id in the component's tile list.
        let pos_of = |id: TileId| -> Result<usize, CoreError> {
            sys.tiles()
                .iter()
                .position(|t| t.id == id)
                .ok_or(CoreError::UnknownTile(id.0, sys.tile_count()))
        };
        for p in sys.forbidden() {
            let mut cells = Vec::with_capacity(p.len());
            for (o, choice) in p.cells() {
                let mut allowed = Vec::with_capacity(choice.len());
                for &id in choice.ids() {
                    allowed.push(pos_of(id)?);
                }
                cells.push((o, idx.lift(k, &allowed)));
            }
            forbidden.push(Pattern::with_choices(cells));
        }
    }

    for p in coupling {
        for (_, choice) in p.cells() {
            for &id in choice.ids() {
                if id.index() >= total {
                    return Err(CoreError::AlphabetMismatch(format!(
                        "coupling pattern references tuple tile {id} outside product of size {total}"
                    )));
                }
            }
        }
        forbidden.push(p.clone());
    }

    Ok(TilingSystem::new(tiles, forbidden))
}

/// Tagged union of two systems: both alphabets side by side, both rule sets,
/// plus rules forbidding any horizontal or vertical adjacency that mixes a
/// tile from one side with a tile from the other.
pub fn disjoint_union(s1: &TilingSystem, s2: &TilingSystem) -> TilingSystem {
    let n1 = s1.tile_count() as u32;
    let mut tiles = Vec::with_capacity(s1.tile_count() + s2.tile_count());
    for (i, t) in s1.tiles().iter().enumerate() {
        tiles.push(Tile {
            id: TileId(i as u32),
            label: format!("1:{}", t.label),
            layers: None,
        });
    }
    for (i, t) in s2.tiles().iter().enumerate() {
        tiles.push(Tile {
            id: TileId(n1 + i as u32),
            label: format!("2:{}", t.label),
            layers: None,
        });
    }

    // Dense re-tagging: position in the original tile list becomes the id.
    let remap = |sys: &TilingSystem, base: u32| {
        let map: std::collections::BTreeMap<TileId, TileId> = sys
            .tiles()
            .iter()
            .enumerate()
            .map(|(i, t)| (t.id, TileId(base + i as u32)))
            .collect();
        map
    };
    let m1 = remap(s1, 0);
    let m2 = remap(s2, n1);

    let mut forbidden = Vec::new();
    for p in s1.forbidden() {
        forbidden.push(p.map_ids(|t| m1[&t]));
    }
    for p in s2.forbidden() {
        forbidden.push(p.map_ids(|t| m2[&t]));
    }

    let side1 = TileChoice::from_ids((0..n1).map(TileId));
    let side2 = TileChoice::from_ids((n1..n1 + s2.tile_count() as u32).map(TileId));
    for (a, b) in [(&side1, &side2), (&side2, &side1)] {
        for offset in [(1, 0), (0, 1)] {
            forbidden.push(Pattern::with_choices([
                ((0, 0), a.clone()),
                (offset, b.clone()),
            ]));
        }
    }

    TilingSystem::new(tiles, forbidden)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn validate_accepts_single_tile_system() {
        let sys = TilingSystem::from_labels(["t"], vec![]);
        assert!(validate_system(&sys).is_empty());
    }

    #[test]
    fn validate_reports_unknown_tile() {
        let sys = TilingSystem::from_labels(
            ["a"],
            vec![Pattern::new([((0, 0), TileId(7))])],
        );
        let diags = validate_system(&sys);
        assert_eq!(
            diags,
            vec![Diagnostic::UnknownTile { pattern: 0, id: TileId(7) }]
        );
    }

    #[test]
    fn validate_reports_empty_pattern() {
        let sys = TilingSystem::from_labels(["a"], vec![Pattern::default()]);
        let diags = validate_system(&sys);
        assert_eq!(diags, vec![Diagnostic::EmptyPattern { pattern: 0 }]);
    }

    #[test]
    fn ruleless_system_has_radius_one() {
        let sys = TilingSystem::from_labels(["t"], vec![]);
        assert_eq!(sys.radius(), 1);
    }

    #[test]
    fn product_of_trivial_systems_is_trivial() {
        let fix2 = fixtures::fix2();
        let prod = layer_product(&[fix2.clone(), fix2], &[]).unwrap();
        assert_eq!(prod.tile_count(), 1);
        assert!(prod.forbidden().is_empty());
    }

    #[test]
    fn union_tags_and_blocks_mixing() {
        let u = disjoint_union(&fixtures::fix2(), &fixtures::fix3());
        assert_eq!(u.tile_count(), 2);
        // one rule from FIX3 plus 4 mixing bans
        assert_eq!(u.forbidden().len(), 5);
    }

    #[test]
    fn layer_index_roundtrip() {
        let idx = LayerIndex::new(vec![3, 4, 2]);
        assert_eq!(idx.total(), 24);
        for a in 0..3 {
            for b in 0..4 {
                for c in 0..2 {
                    let id = idx.pack(&[a, b, c]);
                    assert_eq!(idx.coord(id, 0), a);
                    assert_eq!(idx.coord(id, 1), b);
                    assert_eq!(idx.coord(id, 2), c);
                }
            }
        }
    }
}
