//! SMILES reader for the organic subset plus bracket atoms.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Element {
    B,
    C,
    N,
    O,
    P,
    S,
    F,
    Cl,
    Br,
    I,
}

impl Element {
    pub fn atomic_number(self) -> u8 {
        match self {
            Element::B => 5,
            Element::C => 6,
            Element::N => 7,
            Element::O => 8,
            Element::P => 15,
            Element::S => 16,
            Element::F => 9,
            Element::Cl => 17,
            Element::Br => 35,
            Element::I => 53,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Element::B => "B",
            Element::C => "C",
            Element::N => "N",
            Element::O => "O",
            Element::P => "P",
            Element::S => "S",
            Element::F => "F",
            Element::Cl => "Cl",
            Element::Br => "Br",
            Element::I => "I",
        }
    }

    fn aromatic_symbol(self) -> Option<&'static str> {
        match self {
            Element::B => Some("b"),
            Element::C => Some("c"),
            Element::N => Some("n"),
            Element::O => Some("o"),
            Element::P => Some("p"),
            Element::S => Some("s"),
            _ => None,
        }
    }

    /// Allowed valences for unbracketed atoms, ascending.
    fn default_valences(self) -> &'static [u8] {
        match self {
            Element::B => &[3],
            Element::C => &[4],
            Element::N | Element::P => &[3, 5],
            Element::O => &[2],
            Element::S => &[2, 4, 6],
            Element::F | Element::Cl | Element::Br | Element::I => &[1],
        }
    }

    fn from_symbol(s: &str) -> Option<(Element, bool)> {
        Some(match s {
            "B" => (Element::B, false),
            "C" => (Element::C, false),
            "N" => (Element::N, false),
            "O" => (Element::O, false),
            "P" => (Element::P, false),
            "S" => (Element::S, false),
            "F" => (Element::F, false),
            "Cl" => (Element::Cl, false),
            "Br" => (Element::Br, false),
            "I" => (Element::I, false),
            "b" => (Element::B, true),
            "c" => (Element::C, true),
            "n" => (Element::N, true),
            "o" => (Element::O, true),
            "p" => (Element::P, true),
            "s" => (Element::S, true),
            _ => return None,
        })
    }

    pub(crate) fn written(self, aromatic: bool) -> &'static str {
        if aromatic {
            self.aromatic_symbol().unwrap_or(self.symbol())
        } else {
            self.symbol()
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    fn valence_contribution(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Atom {
    pub element: Element,
    pub aromatic: bool,
    pub charge: i8,
    /// Total attached hydrogens, implicit or written.
    pub hydrogens: u8,
    /// Byte offset of the atom in the source string.
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

/// Heavy-atom graph with hydrogens folded into atom counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MolecularGraph {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    #[serde(skip)]
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl MolecularGraph {
    pub(crate) fn from_parts(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Self {
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (i, bond) in bonds.iter().enumerate() {
            adjacency[bond.a].push((bond.b, i));
            adjacency[bond.b].push((bond.a, i));
        }
        Self {
            atoms,
            bonds,
            adjacency,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// `(neighbor, bond index)` pairs of atom `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<&Bond> {
        self.adjacency[a]
            .iter()
            .find(|(n, _)| *n == b)
            .map(|&(_, bi)| &self.bonds[bi])
    }

    pub(crate) fn valence_sum(&self, i: usize) -> u8 {
        self.adjacency[i]
            .iter()
            .map(|&(_, b)| self.bonds[b].order.valence_contribution())
            .sum()
    }

    /// Relabels atoms so that new index `k` holds old atom `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> MolecularGraph {
        let mut inverse = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let atoms = order.iter().map(|&o| self.atoms[o].clone()).collect();
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond {
                a: inverse[b.a],
                b: inverse[b.b],
                order: b.order,
            })
            .collect();
        MolecularGraph::from_parts(atoms, bonds)
    }

    /// Atoms that lie on at least one cycle.
    pub fn ring_atoms(&self) -> Vec<bool> {
        let bridges = self.bridges();
        let mut in_ring = vec![false; self.atoms.len()];
        for (i, bond) in self.bonds.iter().enumerate() {
            if !bridges[i] {
                in_ring[bond.a] = true;
                in_ring[bond.b] = true;
            }
        }
        in_ring
    }

    fn bridges(&self) -> Vec<bool> {
        // iterative Tarjan low-link
        let n = self.atoms.len();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_bridge = vec![false; self.bonds.len()];
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (atom, parent bond, next neighbor position)
            let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (v, parent_bond, ref mut pos)) = stack.last_mut() {
                if *pos < self.adjacency[v].len() {
                    let (w, bi) = self.adjacency[v][*pos];
                    *pos += 1;
                    if Some(bi) == parent_bond {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, Some(bi), 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let (Some(bi), Some(&(u, _, _))) = (parent_bond, stack.last()) {
                        low[u] = low[u].min(low[v]);
                        if low[v] > disc[u] {
                            is_bridge[bi] = true;
                        }
                    }
                }
            }
        }
        is_bridge
    }

    fn is_connected(&self) -> bool {
        if self.atoms.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.atoms.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Implicit hydrogen count of an unbracketed atom, `None` on a valence violation.
pub(crate) fn implicit_hydrogens(element: Element, aromatic: bool, valence_sum: u8) -> Option<u8> {
    if aromatic {
        let used = valence_sum + 1;
        return match element {
            Element::C => 4u8.checked_sub(used),
            Element::B | Element::N | Element::P => {
                let target = 3u8;
                match target.checked_sub(used) {
                    Some(h) => Some(h),
                    None if valence_sum <= 3 => Some(0),
                    None => None,
                }
            }
            Element::O | Element::S => (valence_sum <= 2).then_some(0),
            _ => None,
        };
    }
    element
        .default_valences()
        .iter()
        .find(|&&v| v >= valence_sum)
        .map(|&v| v - valence_sum)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SmilesWarning {
    /// Stereo marker (`@`, `/`, `\`) accepted and dropped.
    StereoIgnored { offset: usize },
    /// Isotope label accepted and dropped.
    IsotopeIgnored { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unbalanced parenthesis")]
    UnbalancedParenthesis,
    #[error("unpaired ring closure {0}")]
    UnpairedRingClosure(u16),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("valence violation")]
    ValenceViolation,
    #[error("aromatic atom outside a ring")]
    AromaticOutsideRing,
    #[error("unexpected character `{0}`")]
    UnexpectedCharacter(char),
    #[error("bond without a following atom")]
    DanglingBond,
    #[error("unterminated bracket atom")]
    UnterminatedBracket,
    #[error("invalid ring closure")]
    InvalidRingClosure,
    #[error("disconnected structures are not supported")]
    Disconnected,
}

/// Parse failure with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(offset: usize, kind: ParseErrorKind) -> Self {
        Self { offset, kind }
    }
}

#[derive(Debug, Clone)]
pub struct ParsedSmiles {
    pub graph: MolecularGraph,
    pub warnings: Vec<SmilesWarning>,
}

/// Parses a SMILES string into a validated molecular graph.
pub fn parse_smiles(s: &str) -> Result<ParsedSmiles, ParseError> {
    Parser::new(s, true).run()
}

/// Parses a group pattern: bracket atoms with exact hydrogen counts, no
/// ring or valence validation.
pub(crate) fn parse_fragment(s: &str) -> Result<MolecularGraph, ParseError> {
    Parser::new(s, false).run().map(|p| p.graph)
}

struct PendingAtom {
    element: Element,
    aromatic: bool,
    charge: i8,
    explicit_h: Option<u8>,
    offset: usize,
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    strict: bool,
    atoms: Vec<PendingAtom>,
    bonds: Vec<Bond>,
    warnings: Vec<SmilesWarning>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, strict: bool) -> Self {
        Self {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            strict,
            atoms: Vec::new(),
            bonds: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn err<T>(&self, offset: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError::new(offset, kind))
    }

    fn run(mut self) -> Result<ParsedSmiles, ParseError> {
        if self.src.trim().is_empty() {
            return self.err(0, ParseErrorKind::Empty);
        }
        let mut prev: Option<usize> = None;
        let mut pending_bond: Option<(BondOrder, usize)> = None;
        let mut branches: Vec<(Option<usize>, usize)> = Vec::new();
        // ring number -> (atom, explicit bond, offset)
        let mut rings: BTreeMap<u16, (usize, Option<BondOrder>, usize)> = BTreeMap::new();

        while self.pos < self.bytes.len() {
            let start = self.pos;
            let ch = self.bytes[start] as char;
            match ch {
                '(' => {
                    if prev.is_none() || pending_bond.is_some() {
                        return self.err(start, ParseErrorKind::UnbalancedParenthesis);
                    }
                    branches.push((prev, start));
                    self.pos += 1;
                }
                ')' => {
                    if pending_bond.is_some() {
                        return self.err(start, ParseErrorKind::DanglingBond);
                    }
                    match branches.pop() {
                        Some((p, _)) => prev = p,
                        None => return self.err(start, ParseErrorKind::UnbalancedParenthesis),
                    }
                    self.pos += 1;
                }
                '-' | '=' | '#' | ':' | '/' | '\\' => {
                    if pending_bond.is_some() || prev.is_none() {
                        return self.err(start, ParseErrorKind::DanglingBond);
                    }
                    let order = match ch {
                        '=' => BondOrder::Double,
                        '#' => BondOrder::Triple,
                        ':' => BondOrder::Aromatic,
                        '/' | '\\' => {
                            self.warnings.push(SmilesWarning::StereoIgnored { offset: start });
                            BondOrder::Single
                        }
                        _ => BondOrder::Single,
                    };
                    pending_bond = Some((order, start));
                    self.pos += 1;
                }
                '0'..='9' | '%' => {
                    let Some(atom) = prev else {
                        return self.err(start, ParseErrorKind::InvalidRingClosure);
                    };
                    let number = self.ring_number()?;
                    let explicit = pending_bond.take().map(|(o, _)| o);
                    match rings.remove(&number) {
                        None => {
                            rings.insert(number, (atom, explicit, start));
                        }
                        Some((other, other_bond, _)) => {
                            if other == atom || self.has_bond(other, atom) {
                                return self.err(start, ParseErrorKind::InvalidRingClosure);
                            }
                            let order = match (other_bond, explicit) {
                                (Some(x), Some(y)) if x != y => {
                                    return self.err(start, ParseErrorKind::InvalidRingClosure)
                                }
                                (Some(x), _) | (None, Some(x)) => x,
                                (None, None) => self.default_bond(other, atom),
                            };
                            self.bonds.push(Bond {
                                a: other,
                                b: atom,
                                order,
                            });
                        }
                    }
                }
                '.' => return self.err(start, ParseErrorKind::Disconnected),
                '[' => {
                    let idx = self.bracket_atom()?;
                    self.attach(&mut prev, &mut pending_bond, idx);
                }
                _ if ch.is_ascii_alphabetic() => {
                    let idx = self.organic_atom()?;
                    self.attach(&mut prev, &mut pending_bond, idx);
                }
                _ => {
                    let c = self.src[start..].chars().next().unwrap_or(ch);
                    return self.err(start, ParseErrorKind::UnexpectedCharacter(c));
                }
            }
        }

        if let Some((_, offset)) = pending_bond {
            return self.err(offset, ParseErrorKind::DanglingBond);
        }
        if let Some((_, offset)) = branches.first() {
            return self.err(*offset, ParseErrorKind::UnbalancedParenthesis);
        }
        if let Some((&number, &(_, _, offset))) = rings.iter().next() {
            return self.err(offset, ParseErrorKind::UnpairedRingClosure(number));
        }
        self.finish()
    }

    fn has_bond(&self, a: usize, b: usize) -> bool {
        self.bonds
            .iter()
            .any(|x| (x.a == a && x.b == b) || (x.a == b && x.b == a))
    }

    fn default_bond(&self, a: usize, b: usize) -> BondOrder {
        if self.atoms[a].aromatic && self.atoms[b].aromatic {
            BondOrder::Aromatic
        } else {
            BondOrder::Single
        }
    }

    fn attach(
        &mut self,
        prev: &mut Option<usize>,
        pending_bond: &mut Option<(BondOrder, usize)>,
        idx: usize,
    ) {
        if let Some(p) = *prev {
            let order = pending_bond
                .take()
                .map(|(o, _)| o)
                .unwrap_or_else(|| self.default_bond(p, idx));
            self.bonds.push(Bond { a: p, b: idx, order });
        }
        *prev = Some(idx);
    }

    fn ring_number(&mut self) -> Result<u16, ParseError> {
        let start = self.pos;
        if self.bytes[start] == b'%' {
            let digits = self.src.get(start + 1..start + 3).unwrap_or("");
            if digits.len() != 2 || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return self.err(start, ParseErrorKind::InvalidRingClosure);
            }
            self.pos += 3;
            Ok(digits.parse().expect("two ascii digits"))
        } else {
            self.pos += 1;
            Ok(u16::from(self.bytes[start] - b'0'))
        }
    }

    fn organic_atom(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let two = self.src.get(start..start + 2);
        let (symbol, len) = match two {
            Some("Cl") | Some("Br") => (two.unwrap(), 2),
            _ => (&self.src[start..start + 1], 1),
        };
        let Some((element, aromatic)) = Element::from_symbol(symbol) else {
            let word: String = self.src[start..]
                .chars()
                .take_while(|c| c.is_ascii_alphabetic())
                .take(2)
                .collect();
            return self.err(start, ParseErrorKind::UnknownElement(word));
        };
        self.pos += len;
        self.atoms.push(PendingAtom {
            element,
            aromatic,
            charge: 0,
            explicit_h: None,
            offset: start,
        });
        Ok(self.atoms.len() - 1)
    }

    fn bracket_atom(&mut self) -> Result<usize, ParseError> {
        let open = self.pos;
        let Some(close_rel) = self.src[open..].find(']') else {
            return self.err(open, ParseErrorKind::UnterminatedBracket);
        };
        let close = open + close_rel;
        let body = &self.src[open + 1..close];
        let mut i = 0;
        let b = body.as_bytes();
        let at = |i: usize| open + 1 + i;

        let iso_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i > iso_start {
            self.warnings.push(SmilesWarning::IsotopeIgnored { offset: at(iso_start) });
        }

        let sym_start = i;
        let (element, aromatic) = {
            let two = body.get(i..i + 2);
            let one = body.get(i..i + 1).unwrap_or("");
            if let Some((e, a)) = two.and_then(Element::from_symbol) {
                i += 2;
                (e, a)
            } else if let Some((e, a)) = Element::from_symbol(one) {
                i += 1;
                (e, a)
            } else {
                let word: String = body[i..]
                    .chars()
                    .take_while(|c| c.is_ascii_alphabetic())
                    .collect();
                let word = if word.is_empty() { body.to_string() } else { word };
                return self.err(at(sym_start), ParseErrorKind::UnknownElement(word));
            }
        };

        if i < b.len() && b[i] == b'@' {
            self.warnings.push(SmilesWarning::StereoIgnored { offset: at(i) });
            while i < b.len() && b[i] == b'@' {
                i += 1;
            }
            if matches!(body.get(i..i + 2), Some("TH" | "AL" | "SP" | "TB" | "OH")) {
                i += 2;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
            }
        }

        let mut hydrogens = 0u8;
        if i < b.len() && b[i] == b'H' {
            i += 1;
            let d = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            hydrogens = if i > d {
                body[d..i]
                    .parse()
                    .map_err(|_| ParseError::new(at(d), ParseErrorKind::ValenceViolation))?
            } else {
                1
            };
        }

        let mut charge: i8 = 0;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            let sign: i8 = if b[i] == b'+' { 1 } else { -1 };
            let sym = b[i];
            i += 1;
            let d = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if i > d {
                let mag: i8 = body[d..i]
                    .parse()
                    .map_err(|_| ParseError::new(at(d), ParseErrorKind::ValenceViolation))?;
                charge = sign * mag;
            } else {
                charge = sign;
                while i < b.len() && b[i] == sym {
                    charge += sign;
                    i += 1;
                }
            }
        }

        if i < b.len() && b[i] == b':' {
            i += 1;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        }

        if i != b.len() {
            let c = body[i..].chars().next().unwrap_or(']');
            return self.err(at(i), ParseErrorKind::UnexpectedCharacter(c));
        }

        self.pos = close + 1;
        self.atoms.push(PendingAtom {
            element,
            aromatic,
            charge,
            explicit_h: Some(hydrogens),
            offset: open,
        });
        Ok(self.atoms.len() - 1)
    }

    fn finish(self) -> Result<ParsedSmiles, ParseError> {
        let strict = self.strict;
        let atoms: Vec<Atom> = self
            .atoms
            .iter()
            .map(|a| Atom {
                element: a.element,
                aromatic: a.aromatic,
                charge: a.charge,
                hydrogens: a.explicit_h.unwrap_or(0),
                offset: a.offset,
            })
            .collect();
        let mut graph = MolecularGraph::from_parts(atoms, self.bonds);

        if strict {
            for (i, pending) in self.atoms.iter().enumerate() {
                let sum = graph.valence_sum(i);
                match pending.explicit_h {
                    None => {
                        let h = implicit_hydrogens(pending.element, pending.aromatic, sum)
                            .ok_or(ParseError::new(pending.offset, ParseErrorKind::ValenceViolation))?;
                        graph.atoms[i].hydrogens = h;
                    }
                    Some(h) => {
                        let max = match pending.element {
                            Element::B => 3,
                            Element::C => 4,
                            Element::N | Element::P => 5,
                            Element::O => 2,
                            Element::S => 6,
                            _ => 1,
                        } + pending.charge.unsigned_abs();
                        let used = sum + h + u8::from(pending.aromatic);
                        if used > max {
                            return Err(ParseError::new(pending.offset, ParseErrorKind::ValenceViolation));
                        }
                    }
                }
            }
            let in_ring = graph.ring_atoms();
            for (i, atom) in graph.atoms.iter().enumerate() {
                if atom.aromatic && !in_ring[i] {
                    return Err(ParseError::new(atom.offset, ParseErrorKind::AromaticOutsideRing));
                }
            }
            for bond in &graph.bonds {
                if bond.order == BondOrder::Aromatic
                    && !(graph.atoms[bond.a].aromatic && graph.atoms[bond.b].aromatic)
                {
                    let off = graph.atoms[bond.b].offset;
                    return Err(ParseError::new(off, ParseErrorKind::ValenceViolation));
                }
            }
        }
        if !graph.is_connected() {
            return Err(ParseError::new(0, ParseErrorKind::Disconnected));
        }
        Ok(ParsedSmiles {
            graph,
            warnings: self.warnings,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(s: &str) -> MolecularGraph {
        parse_smiles(s).unwrap().graph
    }

    #[test]
    fn hexane_chain() {
        let g = graph("CCCCCC");
        assert_eq!(g.atom_count(), 6);
        assert_eq!(g.bonds().len(), 5);
        let h: Vec<u8> = g.atoms().iter().map(|a| a.hydrogens).collect();
        assert_eq!(h, vec![3, 2, 2, 2, 2, 3]);
    }

    #[test]
    fn reference_molecules_parse() {
        for s in ["CCO", "Oc1ccccc1", "CCCc1ccccc1N"] {
            parse_smiles(s).unwrap();
        }
        let g = graph("Oc1ccccc1");
        assert_eq!(g.atoms()[0].hydrogens, 1);
        assert_eq!(g.atoms()[1].hydrogens, 0);
        assert_eq!(g.atoms()[2].hydrogens, 1);
        assert!(g.ring_atoms()[3]);
        assert!(!g.ring_atoms()[0]);
    }

    #[test]
    fn bracket_atoms() {
        let g = graph("C[NH3+]");
        assert_eq!(g.atoms()[1].charge, 1);
        assert_eq!(g.atoms()[1].hydrogens, 3);
        let g = graph("c1cc[nH]c1");
        assert_eq!(g.atoms()[3].hydrogens, 1);
        let g = graph("[O-]C(=O)C");
        assert_eq!(g.atoms()[0].charge, -1);
        let g = graph("C[N++](C)(C)C");
        assert_eq!(g.atoms()[1].charge, 2);
    }

    #[test]
    fn ring_closures() {
        let g = graph("C1CC1");
        assert_eq!(g.bonds().len(), 3);
        let g = graph("C%12CCCCC%12");
        assert_eq!(g.bonds().len(), 6);
        let g = graph("C=1CCCCC1");
        assert_eq!(g.bond_between(0, 5).unwrap().order, BondOrder::Double);
    }

    #[test]
    fn stereo_and_isotopes_warn() {
        let p = parse_smiles("F/C=C/F").unwrap();
        assert_eq!(p.warnings.len(), 2);
        let p = parse_smiles("N[C@@H](C)C(=O)O").unwrap();
        assert!(matches!(p.warnings[0], SmilesWarning::StereoIgnored { .. }));
        assert_eq!(p.graph.atoms()[1].hydrogens, 1);
        let p = parse_smiles("[13CH4]").unwrap();
        assert!(matches!(p.warnings[0], SmilesWarning::IsotopeIgnored { offset: 1 }));
    }

    #[test]
    fn errors_with_offsets() {
        let e = parse_smiles("C(").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnbalancedParenthesis);
        assert_eq!(e.offset, 1);
        let e = parse_smiles("c1ccccc").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnpairedRingClosure(1));
        assert_eq!(e.offset, 1);
        let e = parse_smiles("CCXe").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnknownElement(_)));
        assert_eq!(e.offset, 2);
        let e = parse_smiles("C(C)(C)(C)(C)C").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ValenceViolation);
        let e = parse_smiles("CC)").unwrap_err();
        assert_eq!(e, ParseError::new(2, ParseErrorKind::UnbalancedParenthesis));
        assert_eq!(parse_smiles("").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse_smiles("CC=").unwrap_err().kind, ParseErrorKind::DanglingBond);
        assert_eq!(parse_smiles("CC.O").unwrap_err().kind, ParseErrorKind::Disconnected);
        assert_eq!(parse_smiles("cc").unwrap_err().kind, ParseErrorKind::AromaticOutsideRing);
        assert_eq!(parse_smiles("C[CH2").unwrap_err().kind, ParseErrorKind::UnterminatedBracket);
        assert_eq!(parse_smiles("C11").unwrap_err().kind, ParseErrorKind::InvalidRingClosure);
    }

    #[test]
    fn fragment_mode_skips_validation() {
        let g = parse_fragment("[c][OH]").unwrap();
        assert_eq!(g.atoms()[0].hydrogens, 0);
        assert_eq!(g.atoms()[1].hydrogens, 1);
        assert_eq!(g.bonds()[0].order, BondOrder::Single);
    }
}
