//! Van Kampen diagrams built from computations: θ-bands, trapezia, disk
//! diagrams and the `u^n` diagram.
//!
//! A diagram is a band complex. Edges carry a positive generator name and
//! a direction; cells and the outer contour list their edges as signed
//! traversals, counterclockwise. Gluing two paths identifies their edges,
//! and a path is folded (adjacent `x x^-1` edges identified) where free
//! reduction would cancel letters. In every θ-band the θ-edges point up.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::Zero;

use crate::admissible::AdmissibleWord;
use crate::computation::Computation;
use crate::error::{Error, Result};
use crate::machine::{inverse_rule, Letter, Machine, RuleIdx};
use crate::metrics::{modified_length, Bead, MetricParams, Necklace};
use crate::presentation::{theta_name, GenKind};
use crate::tower::{canonical_accepting_m, config_i, config_j, TowerParams, SPECIAL_SECTOR};
use crate::word::{FreeWord, Lit};

pub type EdgeId = usize;

/// An edge traversed along (`inv == false`) or against its direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Trav {
    pub edge: EdgeId,
    pub inv: bool,
}

impl Trav {
    pub fn inverse(self) -> Trav {
        Trav {
            edge: self.edge,
            inv: !self.inv,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub kind: GenKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    ThetaQ,
    ThetaA,
    Hub,
    Disk,
    ACell,
}

impl CellKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CellKind::ThetaQ => "theta-q",
            CellKind::ThetaA => "theta-a",
            CellKind::Hub => "hub",
            CellKind::Disk => "disk",
            CellKind::ACell => "a-cell",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub kind: CellKind,
    pub contour: Vec<Trav>,
    /// Index of the θ-band holding the cell.
    pub band: Option<usize>,
}

/// One maximal θ-band; paths read left to right, sides bottom to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaBand {
    pub rule: RuleIdx,
    pub cells: Vec<usize>,
    pub bottom: Vec<Trav>,
    /// Untrimmed top.
    pub top: Vec<Trav>,
    pub left: Trav,
    pub right: Trav,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GluingKind {
    /// Top of one θ-band and bottom of the next.
    Stack,
    /// Left and right side of a trapezium.
    Sides,
    /// Top of a trapezium and a hub.
    Hub,
    /// Two disk diagrams along their common contour.
    Contour,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub kind: GluingKind,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
    pub bands: Vec<ThetaBand>,
    pub gluings: Vec<Gluing>,
    /// Counterclockwise contour.
    pub boundary: Vec<Trav>,
}

// ---------------------------------------------------------------- construction

/// Edges live in a union-find with parity, so that identifying two
/// traversals is cheap while a diagram is assembled.
#[derive(Default)]
struct Builder {
    edges: Vec<Edge>,
    parent: Vec<(EdgeId, bool)>,
    cells: Vec<Cell>,
    bands: Vec<ThetaBand>,
    gluings: Vec<Gluing>,
}

impl Builder {
    fn edge(&mut self, name: &str, kind: GenKind, inv: bool) -> Trav {
        let id = self.edges.len();
        self.edges.push(Edge {
            name: name.to_string(),
            kind,
        });
        self.parent.push((id, false));
        Trav { edge: id, inv }
    }

    fn find(&self, t: Trav) -> Trav {
        let mut e = t.edge;
        let mut inv = t.inv;
        loop {
            let (p, flip) = self.parent[e];
            if p == e {
                return Trav { edge: e, inv };
            }
            inv ^= flip;
            e = p;
        }
    }

    fn label(&self, t: Trav) -> Lit {
        Lit::signed(self.edges[t.edge].name.clone(), t.inv)
    }

    fn kind(&self, t: Trav) -> GenKind {
        self.edges[t.edge].kind
    }

    /// Makes `b` traverse the same edge, in the same direction, as `a`.
    fn identify(&mut self, a: Trav, b: Trav) -> Result<()> {
        if self.label(a) != self.label(b) {
            return Err(Error::Diagram(format!("cannot glue {} to {}", self.label(b), self.label(a))));
        }
        let ra = self.find(a);
        let rb = self.find(b);
        if ra.edge == rb.edge {
            return if ra.inv == rb.inv {
                Ok(())
            } else {
                Err(Error::Diagram("gluing an edge to its own inverse".into()))
            };
        }
        self.parent[rb.edge] = (ra.edge, ra.inv ^ rb.inv);
        Ok(())
    }

    fn glue_paths(&mut self, kind: GluingKind, a: &[Trav], b: &[Trav]) -> Result<()> {
        if a.len() != b.len() {
            return Err(Error::Diagram(format!("glued paths have lengths {} and {}", a.len(), b.len())));
        }
        for (&x, &y) in a.iter().zip(b) {
            self.identify(x, y)?;
        }
        self.gluings.push(Gluing {
            kind,
            edges: a.iter().map(|t| t.edge).collect(),
        });
        Ok(())
    }

    /// Identifies adjacent edges of a path whose labels cancel.
    fn fold(&mut self, path: &[Trav]) -> Result<Vec<Trav>> {
        let mut out: Vec<Trav> = Vec::new();
        for &t in path {
            match out.last() {
                Some(&last) if self.label(last) == self.label(t.inverse()) => {
                    self.identify(last.inverse(), t)?;
                    out.pop();
                }
                _ => out.push(t),
            }
        }
        Ok(out)
    }

    fn cell(&mut self, kind: CellKind, contour: Vec<Trav>, band: Option<usize>) -> usize {
        self.cells.push(Cell { kind, contour, band });
        self.cells.len() - 1
    }

    fn letter_trav(&mut self, m: &Machine, l: Letter) -> Trav {
        let kind = if l.is_state() { GenKind::Q } else { GenKind::A };
        self.edge(m.hardware().name(l), kind, l.is_inv())
    }

    fn word_path(&mut self, m: &Machine, w: &AdmissibleWord) -> Vec<Trav> {
        w.letters().iter().map(|&l| self.letter_trav(m, l)).collect()
    }

    /// Cells of the band of the positive rule `r` with bottom `bottom`
    /// (reading `w`). Returns the unfolded top and the side edges.
    fn positive_band(
        &mut self,
        m: &Machine,
        r: RuleIdx,
        w: &AdmissibleWord,
        bottom: &[Trav],
        band: usize,
    ) -> Result<(Vec<usize>, Vec<Trav>, Trav, Trav)> {
        let hw = m.hardware();
        let np = m.num_parts();
        let rule = m.rule(r);
        let not_admissible = |reason: String| Error::NotAdmissible {
            rule: rule.id.clone(),
            reason,
        };
        let theta = |b: &mut Builder, i: usize| b.edge(&theta_name(&rule.id, i % np), GenKind::Theta, false);
        let mut cells = Vec::new();
        let mut top = Vec::new();
        let mut first_left: Option<Trav> = None;
        let mut cur: Option<(usize, Trav)> = None;
        for (&l, &bt) in w.letters().iter().zip(bottom) {
            let (left_idx, right_idx) = if l.is_state() {
                let p = hw.state_part(l.index());
                if l.is_inv() {
                    ((p + 1) % np, p)
                } else {
                    (p, (p + 1) % np)
                }
            } else {
                let (i, _) = cur.ok_or_else(|| not_admissible("tape letter before the first state letter".into()))?;
                (i, i)
            };
            let left = match cur {
                Some((i, t)) if i == left_idx => t,
                Some((i, _)) => return Err(not_admissible(format!("sector of θ_{i} meets θ_{left_idx}"))),
                None => {
                    let t = theta(self, left_idx);
                    first_left = Some(t);
                    t
                }
            };
            let right = theta(self, right_idx);
            let (kind, cell_top) = if l.is_state() {
                let part = &rule.parts[hw.state_part(l.index())];
                if part.from != l.index() {
                    return Err(not_admissible(format!("state {} is not {}", hw.name(l), hw.name(Letter::state(part.from, false)))));
                }
                let mut t = Vec::new();
                if let Some(v) = part.left {
                    t.push(self.letter_trav(m, v));
                }
                t.push(self.letter_trav(m, Letter::state(part.to, false)));
                if let Some(u) = part.right {
                    t.push(self.letter_trav(m, u));
                }
                if l.is_inv() {
                    t = t.into_iter().rev().map(Trav::inverse).collect();
                }
                (CellKind::ThetaQ, t)
            } else {
                let s = hw.left_sector(left_idx);
                if !rule.domains[s].contains(l.index()) {
                    return Err(not_admissible(format!("{} is outside the domain", hw.name(l))));
                }
                (CellKind::ThetaA, vec![self.letter_trav(m, l)])
            };
            let mut contour = vec![bt, right];
            contour.extend(cell_top.iter().rev().map(|t| t.inverse()));
            contour.push(left.inverse());
            cells.push(self.cell(kind, contour, Some(band)));
            top.extend(cell_top);
            cur = Some((right_idx, right));
        }
        match (first_left, cur) {
            (Some(l), Some((_, r))) => Ok((cells, top, l, r)),
            _ => Err(Error::Diagram("empty word".into())),
        }
    }

    /// Adds the θ-band of `r` applied to `w` and returns its index. Its
    /// bottom is glued to `below` when given.
    fn band(&mut self, m: &Machine, w: &AdmissibleWord, r: RuleIdx, below: Option<&[Trav]>) -> Result<usize> {
        let idx = self.bands.len();
        let rule = m.rule(r);
        let (cells, bottom, top, left, right) = if rule.positive {
            let bottom = self.word_path(m, w);
            let (cells, top, left, right) = self.positive_band(m, r, w, &bottom, idx)?;
            let top = self.fold(&top)?;
            (cells, bottom, top, left, right)
        } else {
            // the band of the inverse rule on the result, mirrored top to bottom
            let v = m.apply(w, r)?;
            let top = self.word_path(m, &v);
            let (cells, up, left, right) = self.positive_band(m, inverse_rule(r), &v, &top, idx)?;
            for &c in &cells {
                let k = &mut self.cells[c].contour;
                *k = k.iter().rev().map(|t| t.inverse()).collect();
            }
            let bottom = self.fold(&up)?;
            (cells, bottom, top, left.inverse(), right.inverse())
        };
        let labels: Vec<Lit> = bottom.iter().map(|&t| self.label(t)).collect();
        let expected: Vec<Lit> = w.letters().iter().map(|&l| Lit::signed(m.hardware().name(l), l.is_inv())).collect();
        if labels != expected {
            return Err(Error::Diagram(format!("band of {} does not fit its bottom word", rule.id)));
        }
        if let Some(below) = below {
            self.glue_paths(GluingKind::Stack, below, &bottom)?;
        }
        self.bands.push(ThetaBand {
            rule: r,
            cells,
            bottom,
            top,
            left,
            right,
        });
        Ok(idx)
    }

    fn trimmed(&self, path: &[Trav]) -> (usize, usize) {
        let first = path.iter().position(|&t| self.kind(t) == GenKind::Q).unwrap_or(path.len());
        let last = path.iter().rposition(|&t| self.kind(t) == GenKind::Q).map_or(first, |i| i + 1);
        (first, last)
    }

    /// Stacks one band per rule of `c`; returns the contour
    /// `bottom, right side, top^-1, left side^-1`.
    fn stack(&mut self, m: &Machine, c: &Computation) -> Result<Vec<Trav>> {
        if c.history.is_empty() {
            return Err(Error::Diagram("empty history".into()));
        }
        let first = self.bands.len();
        let mut below: Option<Vec<Trav>> = None;
        for (i, &r) in c.history.iter().enumerate() {
            let b = self.band(m, &c.words[i], r, below.as_deref())?;
            let top = self.bands[b].top.clone();
            let (s, e) = self.trimmed(&top);
            below = Some(top[s..e].to_vec());
        }
        let bands = self.bands[first..].to_vec();
        let mut contour = bands[0].bottom.clone();
        for (i, b) in bands.iter().enumerate() {
            contour.push(b.right);
            if i + 1 < bands.len() {
                let (_, e) = self.trimmed(&b.top);
                contour.extend(b.top[e..].iter().rev().map(|t| t.inverse()));
            }
        }
        let last = bands.last().expect("nonempty history");
        contour.extend(last.top.iter().rev().map(|t| t.inverse()));
        for (i, b) in bands.iter().enumerate().rev() {
            contour.push(b.left.inverse());
            if i > 0 {
                let (s, _) = self.trimmed(&bands[i - 1].top);
                contour.extend(bands[i - 1].top[..s].iter().rev().map(|t| t.inverse()));
            }
        }
        Ok(contour)
    }

    /// Resolves every traversal to its root edge and renumbers edges densely.
    fn finish(self, boundary: Vec<Trav>) -> Diagram {
        let mut ids: HashMap<EdgeId, EdgeId> = HashMap::new();
        let mut edges = Vec::new();
        let mut map = |b: &Builder, t: Trav| {
            let r = b.find(t);
            let id = *ids.entry(r.edge).or_insert_with(|| {
                edges.push(b.edges[r.edge].clone());
                edges.len() - 1
            });
            Trav { edge: id, inv: r.inv }
        };
        let cells = self
            .cells
            .iter()
            .map(|c| Cell {
                kind: c.kind,
                contour: c.contour.iter().map(|&t| map(&self, t)).collect(),
                band: c.band,
            })
            .collect();
        let bands = self
            .bands
            .iter()
            .map(|b| ThetaBand {
                rule: b.rule,
                cells: b.cells.clone(),
                bottom: b.bottom.iter().map(|&t| map(&self, t)).collect(),
                top: b.top.iter().map(|&t| map(&self, t)).collect(),
                left: map(&self, b.left),
                right: map(&self, b.right),
            })
            .collect();
        let gluings = self
            .gluings
            .iter()
            .map(|g| Gluing {
                kind: g.kind,
                edges: g.edges.iter().map(|&e| map(&self, Trav { edge: e, inv: false }).edge).collect(),
            })
            .collect();
        let boundary = boundary.iter().map(|&t| map(&self, t)).collect();
        Diagram {
            edges,
            cells,
            bands,
            gluings,
            boundary,
        }
    }

    /// Disk diagram of an accepted configuration: a trapezium whose sides
    /// are glued, with a hub in the middle. Returns the contour.
    fn disk(&mut self, m: &Machine, witness: &Computation) -> Result<Vec<Trav>> {
        let acc = m.accept_configuration()?;
        let w = witness.initial();
        if witness.last() != &acc {
            return Err(Error::NotAccepted(m.format_word(w)));
        }
        let again = m.run(w, &witness.history).map_err(|e| Error::NotAccepted(format!("{}: {e}", m.format_word(w))))?;
        if &again != witness {
            return Err(Error::NotAccepted(m.format_word(w)));
        }
        if witness.history.is_empty() {
            let path = self.word_path(m, &acc);
            self.cell(CellKind::Hub, path.clone(), None);
            return Ok(path);
        }
        let first = self.bands.len();
        self.stack(m, witness)?;
        let bands = self.bands[first..].to_vec();
        for b in &bands {
            let (s, e) = self.trimmed(&b.top);
            if s != 0 || e != b.top.len() {
                return Err(Error::Diagram("sides of the trapezium carry a-edges".into()));
            }
        }
        let left: Vec<Trav> = bands.iter().map(|b| b.left).collect();
        let right: Vec<Trav> = bands.iter().map(|b| b.right).collect();
        self.glue_paths(GluingKind::Sides, &right, &left)?;
        let top = bands.last().expect("nonempty history").top.clone();
        let hub: Vec<Trav> = top.iter().map(|&t| self.edge_like(t)).collect();
        self.glue_paths(GluingKind::Hub, &top, &hub)?;
        self.cell(CellKind::Hub, hub, None);
        Ok(bands[0].bottom.clone())
    }

    fn edge_like(&mut self, t: Trav) -> Trav {
        let Edge { name, kind } = self.edges[t.edge].clone();
        self.edge(&name, kind, t.inv)
    }
}

/// The θ-band of one rule applied to `w`.
pub fn theta_band(m: &Machine, w: &AdmissibleWord, r: RuleIdx) -> Result<Diagram> {
    let c = m.run(w, &[r])?;
    trapezium(m, &c)
}

/// Trapezium of a computation: one θ-band per rule, bottom to top.
pub fn trapezium(m: &Machine, c: &Computation) -> Result<Diagram> {
    if c.words.iter().any(|w| !starts_and_ends_with_q(w)) {
        return Err(Error::Diagram("words must start and end with state letters".into()));
    }
    let mut b = Builder::default();
    let contour = b.stack(m, c)?;
    Ok(b.finish(contour))
}

fn starts_and_ends_with_q(w: &AdmissibleWord) -> bool {
    matches!((w.letters().first(), w.letters().last()), (Some(x), Some(y)) if x.is_state() && y.is_state())
}

/// Disk diagram with contour `W` from an accepting computation of `W`.
pub fn disk_diagram(m: &Machine, witness: &Computation) -> Result<Diagram> {
    let mut b = Builder::default();
    let contour = b.disk(m, witness)?;
    Ok(b.finish(contour))
}

/// The `u^n` diagram of M: disk diagrams of `I(u^n)` and of the mirror
/// image of `J(u^n)` glued along everything but the special input sector.
pub fn un_diagram(m: &Machine, p: &TowerParams, u: &FreeWord) -> Result<Diagram> {
    let un = u.pow(p.n as i64);
    if un.is_empty() {
        return Err(Error::Diagram("u^n is trivial".into()));
    }
    let wi = config_i(m, &un)?;
    let wj = config_j(m, &un)?;
    let ci = m.run(&wi, &canonical_accepting_m(m, p, u, 1)?)?;
    let cj = m.run(&wj, &canonical_accepting_m(m, p, u, 2)?)?;
    let mut b = Builder::default();
    let ki = b.disk(m, &ci)?;
    let cells_i = b.cells.len();
    let kj = b.disk(m, &cj)?;
    for c in &mut b.cells[cells_i..] {
        c.contour = c.contour.iter().rev().map(|t| t.inverse()).collect();
    }
    // positions of I(u^n) inside the special sector
    let hw = m.hardware();
    let mut special = Vec::new();
    let mut pos = 0;
    for view in wi.sectors(hw) {
        let start = pos + 1;
        pos = start + view.tape.len();
        if view.sector == SPECIAL_SECTOR {
            special = (start..pos).collect();
        }
    }
    let rest: Vec<Trav> = ki.iter().enumerate().filter(|(i, _)| !special.contains(i)).map(|(_, &t)| t).collect();
    b.glue_paths(GluingKind::Contour, &rest, &kj)?;
    let boundary = special.iter().map(|&i| ki[i]).collect();
    Ok(b.finish(boundary))
}

// ---------------------------------------------------------------- reading diagrams

impl Diagram {
    pub fn label(&self, t: Trav) -> Lit {
        Lit::signed(self.edges[t.edge].name.clone(), t.inv)
    }

    pub fn path_label(&self, path: &[Trav]) -> Vec<Lit> {
        path.iter().map(|&t| self.label(t)).collect()
    }

    pub fn boundary_label(&self) -> Vec<Lit> {
        self.path_label(&self.boundary)
    }

    pub fn kind(&self, t: Trav) -> GenKind {
        self.edges[t.edge].kind
    }

    /// Number of cells; 0-cells are never materialized.
    pub fn area(&self) -> usize {
        self.cells.len()
    }

    pub fn count(&self, kind: CellKind) -> usize {
        self.cells.iter().filter(|c| c.kind == kind).count()
    }

    fn trim(&self, path: &[Trav]) -> Vec<Trav> {
        let first = path.iter().position(|&t| self.kind(t) == GenKind::Q);
        let last = path.iter().rposition(|&t| self.kind(t) == GenKind::Q);
        match (first, last) {
            (Some(s), Some(e)) => path[s..=e].to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn tbot(&self, band: usize) -> Vec<Trav> {
        self.trim(&self.bands[band].bottom)
    }

    pub fn ttop(&self, band: usize) -> Vec<Trav> {
        self.trim(&self.bands[band].top)
    }

    /// Rules read off the bands, bottom to top.
    pub fn history(&self) -> Vec<RuleIdx> {
        self.bands.iter().map(|b| b.rule).collect()
    }

    /// The θ-letters along the right side, bottom to top.
    pub fn right_side(&self) -> Vec<Lit> {
        self.bands.iter().map(|b| self.label(b.right)).collect()
    }

    /// Reads the computation back: tbot of the first band, then ttop of every band.
    pub fn read_computation(&self, m: &Machine) -> Result<Computation> {
        let hw = m.hardware();
        let word = |path: &[Trav]| -> Result<AdmissibleWord> {
            let letters = path
                .iter()
                .map(|&t| {
                    let l = hw.letter(&self.edges[t.edge].name)?;
                    Ok(if t.inv { l.inverse() } else { l })
                })
                .collect::<Result<Vec<_>>>()?;
            AdmissibleWord::new(hw, letters)
        };
        let mut words = vec![word(&self.tbot(0))?];
        for i in 0..self.bands.len() {
            words.push(word(&self.ttop(i))?);
        }
        Ok(Computation {
            history: self.history(),
            words,
        })
    }

    /// `Σ wt(Π)`: 1 for (θ,q)- and (θ,a)-cells, `C₁|∂Π|²` for hubs and
    /// disks (modified length), `C₁‖∂Π‖²` for a-cells.
    pub fn weight(&self, params: &MetricParams) -> Rational64 {
        let mut total = Rational64::zero();
        for c in &self.cells {
            total += match c.kind {
                CellKind::ThetaQ | CellKind::ThetaA => Rational64::from_integer(1),
                CellKind::Hub | CellKind::Disk => {
                    let kinds: Vec<GenKind> = c.contour.iter().map(|&t| self.kind(t)).collect();
                    let len = modified_length(&kinds, params.delta);
                    params.c1 * len * len
                }
                CellKind::ACell => params.c1 * Rational64::from_integer((c.contour.len() * c.contour.len()) as i64),
            };
        }
        total
    }

    /// White bead per θ-edge and black bead per q-edge of the contour,
    /// starting at the first edge with the least name.
    pub fn necklace(&self) -> Necklace {
        let start = (0..self.boundary.len())
            .filter(|&i| self.kind(self.boundary[i]) != GenKind::A)
            .min_by(|&i, &j| self.edges[self.boundary[i].edge].name.cmp(&self.edges[self.boundary[j].edge].name))
            .unwrap_or(0);
        let beads = (0..self.boundary.len())
            .map(|k| self.boundary[(start + k) % self.boundary.len()])
            .filter_map(|t| match self.kind(t) {
                GenKind::Theta => Some(Bead::White),
                GenKind::Q => Some(Bead::Black),
                GenKind::A => None,
            })
            .collect();
        Necklace(beads)
    }

    pub fn mixture(&self, params: &MetricParams) -> usize {
        self.necklace().mixture(params.j)
    }
}

// ---------------------------------------------------------------- structural checks

/// Result of [`Diagram::check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub theta_bands: usize,
    pub q_bands: usize,
    pub a_bands: usize,
    pub problems: Vec<String>,
}

impl StructureReport {
    pub fn is_ok(&self) -> bool {
        self.problems.is_empty()
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

impl Diagram {
    /// Checks that every edge is traversed once in each direction by the
    /// faces (the contour counting as a face seen from outside), that
    /// every cell label is a relator of its kind, and that maximal q- and
    /// a-bands are not annuli and cross each θ-band at most once. θ-annuli
    /// are reported only in diagrams without hubs.
    pub fn check(&self) -> StructureReport {
        let mut rep = StructureReport::default();
        let mut inner: Vec<Vec<(usize, bool)>> = vec![Vec::new(); self.edges.len()];
        let mut outer: Vec<Vec<bool>> = vec![Vec::new(); self.edges.len()];
        for (ci, c) in self.cells.iter().enumerate() {
            for t in &c.contour {
                inner[t.edge].push((ci, t.inv));
            }
        }
        for t in &self.boundary {
            outer[t.edge].push(t.inv);
        }
        for e in 0..self.edges.len() {
            let ok = match (inner[e].as_slice(), outer[e].as_slice()) {
                ([(_, x), (_, y)], []) => x != y,
                ([(_, x)], [y]) => x == y,
                _ => false,
            };
            if !ok {
                rep.problems.push(format!("edge {e} ({}) has incidences {:?} / {:?}", self.edges[e].name, inner[e], outer[e]));
            }
        }
        for (ci, c) in self.cells.iter().enumerate() {
            let kinds = |k: GenKind| c.contour.iter().filter(|&&t| self.kind(t) == k).count();
            let (th, q, a) = (kinds(GenKind::Theta), kinds(GenKind::Q), kinds(GenKind::A));
            let fine = match c.kind {
                CellKind::ThetaQ => th == 2 && q == 2 && a <= 2,
                CellKind::ThetaA => th == 2 && q == 0 && a == 2,
                CellKind::Hub | CellKind::Disk => th == 0,
                CellKind::ACell => th == 0 && q == 0,
            };
            if !fine {
                rep.problems.push(format!("cell {ci} ({}) has {th} θ-, {q} q- and {a} a-edges", c.kind.as_str()));
            }
        }
        // θ-bands close up around a hub once the sides of a trapezium are glued
        let hubs = self.cells.iter().any(|c| matches!(c.kind, CellKind::Hub | CellKind::Disk));
        let theta = self.bands_of(GenKind::Theta, &[CellKind::ThetaQ, CellKind::ThetaA], !hubs, &mut rep);
        let q = self.bands_of(GenKind::Q, &[CellKind::ThetaQ], true, &mut rep);
        let a = self.bands_of(GenKind::A, &[CellKind::ThetaA], true, &mut rep);
        rep.theta_bands = theta.len();
        rep.q_bands = q.len();
        rep.a_bands = a.len();
        let theta_of: HashMap<usize, usize> =
            theta.iter().enumerate().flat_map(|(i, cs)| cs.iter().map(move |&c| (c, i))).collect();
        for (what, bands) in [("q", &q), ("a", &a)] {
            for cs in bands.iter() {
                let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
                for c in cs {
                    if let Some(&t) = theta_of.get(c) {
                        *seen.entry(t).or_default() += 1;
                    }
                }
                if let Some((t, k)) = seen.iter().find(|(_, &k)| k > 1) {
                    rep.problems.push(format!("a maximal {what}-band crosses θ-band {t} {k} times"));
                }
            }
        }
        // the constructed bands are the maximal θ-bands
        let mut built: Vec<Vec<usize>> = self.bands.iter().map(|b| {
            let mut v = b.cells.clone();
            v.sort_unstable();
            v
        }).collect();
        built.sort();
        let mut found = theta.clone();
        for v in &mut found {
            v.sort_unstable();
        }
        found.sort();
        if built != found {
            rep.problems.push("maximal θ-bands differ from the constructed bands".into());
        }
        rep
    }

    /// Maximal bands of cells of the given kinds linked by shared edges of
    /// `edge_kind`; annuli are reported when `no_annuli` is set.
    fn bands_of(&self, edge_kind: GenKind, cell_kinds: &[CellKind], no_annuli: bool, rep: &mut StructureReport) -> Vec<Vec<usize>> {
        let member = |c: usize| cell_kinds.contains(&self.cells[c].kind);
        let mut owners: Vec<Vec<usize>> = vec![Vec::new(); self.edges.len()];
        for (ci, c) in self.cells.iter().enumerate() {
            if member(ci) {
                for t in &c.contour {
                    if self.kind(*t) == edge_kind {
                        owners[t.edge].push(ci);
                    }
                }
            }
        }
        let mut dsu = Dsu((0..self.cells.len()).collect());
        let mut links = vec![0usize; self.cells.len()];
        let mut link_list = Vec::new();
        for o in &owners {
            if let [x, y] = o.as_slice() {
                link_list.push((*x, *y));
            }
        }
        for &(x, y) in &link_list {
            dsu.union(x, y);
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in (0..self.cells.len()).filter(|&c| member(c)) {
            comps.entry(dsu.find(c)).or_default().push(c);
        }
        for &(x, _) in &link_list {
            let r = dsu.find(x);
            links[r] += 1;
        }
        for (&root, cs) in &comps {
            if no_annuli && links[root] >= cs.len() {
                rep.problems.push(format!("annular band of {} cells through {:?} edges", cs.len(), edge_kind));
            }
        }
        comps.into_values().collect()
    }
}

// ---------------------------------------------------------------- export

/// Graphviz rendering: cells are nodes colored by kind, shared edges are
/// graph edges labelled by their generator.
pub fn write_dot(d: &Diagram) -> String {
    let mut out = String::from("graph diagram {\n  node [shape=box, style=filled];\n");
    for (i, c) in d.cells.iter().enumerate() {
        let color = match c.kind {
            CellKind::ThetaQ => "lightblue",
            CellKind::ThetaA => "lightyellow",
            CellKind::Hub => "salmon",
            CellKind::Disk => "orange",
            CellKind::ACell => "palegreen",
        };
        let band = c.band.map(|b| format!(" band {b}")).unwrap_or_default();
        let _ = writeln!(out, "  c{i} [label=\"{} {i}{band}\", fillcolor={color}];", c.kind.as_str());
    }
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); d.edges.len()];
    for (i, c) in d.cells.iter().enumerate() {
        for t in &c.contour {
            owners[t.edge].push(i);
        }
    }
    for (e, o) in owners.iter().enumerate() {
        if let [x, y] = o.as_slice() {
            let _ = writeln!(out, "  c{x} -- c{y} [label=\"{}\"];", d.edges[e].name);
        }
    }
    out.push_str("}\n");
    out
}

/// One line per edge, cell, band, gluing and the contour.
pub fn write_cells(d: &Diagram) -> String {
    let trav = |t: &Trav| format!("{}{}", if t.inv { "-" } else { "+" }, t.edge);
    let path = |p: &[Trav]| p.iter().map(trav).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    for (i, e) in d.edges.iter().enumerate() {
        let _ = writeln!(out, "edge {i} {}", e.name);
    }
    for (i, c) in d.cells.iter().enumerate() {
        let labels: Vec<String> = d.path_label(&c.contour).iter().map(|l| l.to_string()).collect();
        let _ = writeln!(out, "cell {i} {} {} | {}", c.kind.as_str(), path(&c.contour), labels.join(" "));
    }
    for (i, b) in d.bands.iter().enumerate() {
        let cells: Vec<String> = b.cells.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "band {i} rule {} cells {}", b.rule, cells.join(" "));
    }
    for g in &d.gluings {
        let edges: Vec<String> = g.edges.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "glue {:?} {}", g.kind, edges.join(" "));
    }
    let _ = writeln!(out, "boundary {}", path(&d.boundary));
    out
}

// ---------------------------------------------------------------- area growth

#[derive(Clone, Debug, PartialEq)]
pub struct AreaRow {
    pub u: FreeWord,
    pub area: usize,
    /// `area / ‖u‖²`.
    pub ratio: f64,
}

/// The test word of length `len`: the alphabet letters in turn (`abab..`).
pub fn area_word(alphabet: &[String], len: usize) -> FreeWord {
    FreeWord::new((0..len).map(|i| Lit::new(alphabet[i % alphabet.len()].clone())))
}

/// Areas of `u^n` diagrams for words of the given lengths.
pub fn area_table(m: &Machine, p: &TowerParams, lengths: &[usize]) -> Result<Vec<AreaRow>> {
    lengths
        .iter()
        .map(|&len| {
            if len == 0 {
                return Err(Error::InvalidParams("word length must be positive".into()));
            }
            let u = area_word(&p.alphabet, len);
            let area = un_diagram(m, p, &u)?.area();
            Ok(AreaRow {
                u,
                area,
                ratio: area as f64 / (len * len) as f64,
            })
        })
        .collect()
}

/// Every ratio lies within a factor `f` of the first one.
pub fn ratios_within(rows: &[AreaRow], f: f64) -> bool {
    let Some(first) = rows.first() else { return true };
    rows.iter().all(|r| r.ratio <= first.ratio * f && r.ratio * f >= first.ratio)
}
