//! The fragment catalog, arithmetic variants, fragment strings and fragment cycles.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One of the twelve coefficientless fragments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FragmentKind {
    /// Red arc then orange arc on the main path; blue side arcs.
    G1a,
    /// As `G1a`, with the side arc of the middle node replaced by a CDS on `c`.
    G1b,
    /// As `G1a`, with the side arc of the start node replaced by a CDS on `c`.
    G1c,
    /// As `G1a`, with both side arcs replaced by CDSes (on `c₁` and `c₂`).
    G1d,
    /// Red arc then blue arc on the main path; the CDS on the start node is a side arc.
    G2a,
    /// As `G2a`, with the main-path debt replaced by a CDS on `c`.
    G2b,
    /// As `G2a`, with the side arc of the start node replaced by a CDS on `c`.
    G2c,
    /// As `G2a`, with both replacements (on `c₁` and `c₂`).
    G2d,
    /// A single red arc: the end node writes a CDS on the start node.
    G3a,
    /// As `G3a`, with the side arc of the start node replaced by a CDS on `c`.
    G3b,
    /// A single debt contract.
    D1,
    /// A single CDS on an external reference `c`.
    D2,
}

/// Fragment family: the part of the name before the superscript letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `g₁`: end-node rate `(1 − r)/(2 − r)`.
    G1,
    /// `g₂`: end-node rate `1/(3 − r)`.
    G2,
    /// `g₃`: end-node rate `1/(3 − r)` when followed by a double-prime fragment.
    G3,
    /// `d₁`: identity transfer.
    D1,
    /// `d₂`: identity transfer.
    D2,
}

impl FragmentKind {
    /// The whole catalog in canonical order.
    pub const ALL: [FragmentKind; 12] = [
        FragmentKind::G1a,
        FragmentKind::G1b,
        FragmentKind::G1c,
        FragmentKind::G1d,
        FragmentKind::G2a,
        FragmentKind::G2b,
        FragmentKind::G2c,
        FragmentKind::G2d,
        FragmentKind::G3a,
        FragmentKind::G3b,
        FragmentKind::D1,
        FragmentKind::D2,
    ];

    /// Family of the kind.
    pub fn family(self) -> Family {
        use FragmentKind::*;
        match self {
            G1a | G1b | G1c | G1d => Family::G1,
            G2a | G2b | G2c | G2d => Family::G2,
            G3a | G3b => Family::G3,
            D1 => Family::D1,
            D2 => Family::D2,
        }
    }

    /// Superscript letter of the `g` kinds.
    pub fn letter(self) -> Option<char> {
        use FragmentKind::*;
        match self {
            G1a | G2a | G3a => Some('a'),
            G1b | G2b | G3b => Some('b'),
            G1c | G2c => Some('c'),
            G1d | G2d => Some('d'),
            D1 | D2 => None,
        }
    }

    /// Whether the kind is one of the `g` fragments.
    pub fn is_g(self) -> bool {
        !matches!(self, FragmentKind::D1 | FragmentKind::D2)
    }

    /// Whether the kind is a `g₃` fragment.
    pub fn is_g3(self) -> bool {
        self.family() == Family::G3
    }

    /// The `a` member of the kind's family (`d` kinds map to themselves).
    pub fn a_member(self) -> FragmentKind {
        match self.family() {
            Family::G1 => FragmentKind::G1a,
            Family::G2 => FragmentKind::G2a,
            Family::G3 => FragmentKind::G3a,
            Family::D1 => FragmentKind::D1,
            Family::D2 => FragmentKind::D2,
        }
    }

    /// Short name such as `g1a` or `d2`.
    pub fn name(self) -> &'static str {
        use FragmentKind::*;
        match self {
            G1a => "g1a",
            G1b => "g1b",
            G1c => "g1c",
            G1d => "g1d",
            G2a => "g2a",
            G2b => "g2b",
            G2c => "g2c",
            G2d => "g2d",
            G3a => "g3a",
            G3b => "g3b",
            D1 => "d1",
            D2 => "d2",
        }
    }
}

impl fmt::Display for FragmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FragmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FragmentKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown fragment `{s}`")))
    }
}

/// Arithmetic variant of a fragment: coefficientless, or one of the two coefficient tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// No coefficients assigned.
    #[default]
    Plain,
    /// Primed coefficients: the start node owes notional 1 on its side contract.
    Prime,
    /// Double-primed coefficients (`g` kinds only): the side notional is 2.
    DoublePrime,
}

/// A fragment occurrence: a kind with its arithmetic variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fragment {
    /// Catalog entry.
    pub kind: FragmentKind,
    /// Assigned coefficients.
    pub variant: Variant,
}

impl Fragment {
    /// Coefficientless occurrence of `kind`.
    pub fn plain(kind: FragmentKind) -> Self {
        Self {
            kind,
            variant: Variant::Plain,
        }
    }

    /// Primed occurrence of `kind`.
    pub fn prime(kind: FragmentKind) -> Self {
        Self {
            kind,
            variant: Variant::Prime,
        }
    }

    /// Double-primed occurrence of `kind`; fails for the `d` kinds.
    pub fn double_prime(kind: FragmentKind) -> Result<Self> {
        if !kind.is_g() {
            return Err(Error::InvalidParam(format!(
                "{kind} has no double-prime variant"
            )));
        }
        Ok(Self {
            kind,
            variant: Variant::DoublePrime,
        })
    }

    /// Whether coefficients have been assigned.
    pub fn is_arithmetic(&self) -> bool {
        self.variant != Variant::Plain
    }

    /// Notional of the start node's side contract (1 for primed, 2 for double-primed),
    /// which is also the start node's total liability.
    pub fn start_liability(&self) -> Option<u32> {
        match self.variant {
            Variant::Plain => None,
            Variant::Prime => Some(1),
            Variant::DoublePrime => Some(2),
        }
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let marks = match self.variant {
            Variant::Plain => "",
            Variant::Prime => "'",
            Variant::DoublePrime => "''",
        };
        write!(f, "{}{marks}", self.kind)
    }
}

impl FromStr for Fragment {
    type Err = Error;

    /// Parses `g1a`, `g1a'`, `g1a''` (the typographic marks `′` and `″` are accepted too).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let base = s.trim_end_matches(['\'', '′', '″']);
        let marks: usize = s[base.len()..]
            .chars()
            .map(|c| if c == '″' { 2 } else { 1 })
            .sum();
        let kind: FragmentKind = base.parse()?;
        match marks {
            0 => Ok(Fragment::plain(kind)),
            1 => Ok(Fragment::prime(kind)),
            2 => Fragment::double_prime(kind),
            _ => Err(Error::Parse(format!("too many primes in `{s}`"))),
        }
    }
}

/// A fragment string, or a fragment cycle when `closed` (the end node of the last fragment
/// is identified with the start node of the first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FragmentString {
    fragments: Vec<Fragment>,
    closed: bool,
}

impl FragmentString {
    /// Open string of the given fragments; fails when empty.
    pub fn new(fragments: Vec<Fragment>) -> Result<Self> {
        if fragments.is_empty() {
            return Err(Error::InvalidParam(
                "a fragment string needs at least one fragment".into(),
            ));
        }
        Ok(Self {
            fragments,
            closed: false,
        })
    }

    /// Open string holding one fragment.
    pub fn single(fragment: Fragment) -> Self {
        Self {
            fragments: vec![fragment],
            closed: false,
        }
    }

    /// Parses fragments separated by `.`, `,` or whitespace, e.g. `g1a.g2b.d1.d2`.
    pub fn parse(text: &str) -> Result<Self> {
        let fragments = text
            .split(|c: char| c == '.' || c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Fragment>>>()?;
        Self::new(fragments)
    }

    pub(crate) fn from_parts(fragments: Vec<Fragment>, closed: bool) -> Self {
        Self { fragments, closed }
    }

    /// Merges `self` and `other`: the end node of `self` becomes the start node of `other`.
    pub fn merge(&self, other: &FragmentString) -> Result<FragmentString> {
        if self.closed || other.closed {
            return Err(Error::AlreadyClosed);
        }
        let mut fragments = self.fragments.clone();
        fragments.extend_from_slice(&other.fragments);
        Ok(Self {
            fragments,
            closed: false,
        })
    }

    /// Closes the string into a cycle.
    pub fn close_cycle(&self) -> Result<FragmentString> {
        if self.closed {
            return Err(Error::AlreadyClosed);
        }
        Ok(Self {
            fragments: self.fragments.clone(),
            closed: true,
        })
    }

    /// Whether the string is a cycle.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// The fragments in order (a cycle stores its first fragment once).
    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    /// Number of fragments.
    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    /// Always `false`: strings are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    /// Whether every fragment has coefficients.
    pub fn is_arithmetic(&self) -> bool {
        self.fragments.iter().all(Fragment::is_arithmetic)
    }

    /// Index of the fragment following position `i` (wrapping around in a cycle).
    pub fn follower_index(&self, i: usize) -> Option<usize> {
        if i + 1 < self.len() {
            Some(i + 1)
        } else if self.closed {
            Some(0)
        } else {
            None
        }
    }

    /// Index of the fragment preceding position `i` (wrapping around in a cycle).
    pub fn predecessor_index(&self, i: usize) -> Option<usize> {
        if i > 0 {
            Some(i - 1)
        } else if self.closed {
            Some(self.len() - 1)
        } else {
            None
        }
    }

    /// Kind names without variant marks, joined by `.` (e.g. `g1a.g1a.g1a`).
    pub fn base_names(&self) -> String {
        self.fragments
            .iter()
            .map(|f| f.kind.name())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Symbolic cycle notation: the first fragment is marked with a dot and repeated at the
    /// end (`ġ1a' g2b' d1' d2' ġ1a'`); open strings are written plainly.
    pub fn symbolic(&self) -> String {
        let mut parts: Vec<String> = self.fragments.iter().map(|f| f.to_string()).collect();
        if self.closed {
            let mut first = parts[0].clone();
            first.insert(1, '\u{307}');
            parts[0] = first.clone();
            parts.push(first);
        }
        parts.join(" ")
    }
}

impl fmt::Display for FragmentString {
    /// Fragments with variant marks joined by `.`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fragments.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

/// Merges two strings; see [`FragmentString::merge`].
pub fn merge(a: &FragmentString, b: &FragmentString) -> Result<FragmentString> {
    a.merge(b)
}

/// Closes a string into a cycle; see [`FragmentString::close_cycle`].
pub fn close_cycle(s: &FragmentString) -> Result<FragmentString> {
    s.close_cycle()
}

/// Assigns coefficients: a `g` fragment preceded by a `g₃` becomes double-primed, every
/// other fragment becomes primed. Requires every `g₃` to be followed by a `g₁` or `g₂`
/// fragment (an open string's last fragment has no follower and is exempt).
pub fn assign_arithmetic(c: &FragmentString) -> Result<FragmentString> {
    for (i, f) in c.fragments.iter().enumerate() {
        if f.kind.is_g3() {
            if let Some(j) = c.follower_index(i) {
                let next = c.fragments[j].kind;
                if !matches!(next.family(), Family::G1 | Family::G2) {
                    return Err(Error::G3FollowedByG3OrD(i));
                }
            }
        }
    }
    let fragments = (0..c.len())
        .map(|i| {
            let kind = c.fragments[i].kind;
            let after_g3 = c
                .predecessor_index(i)
                .is_some_and(|p| c.fragments[p].kind.is_g3());
            if kind.is_g() && after_g3 {
                Fragment {
                    kind,
                    variant: Variant::DoublePrime,
                }
            } else {
                Fragment::prime(kind)
            }
        })
        .collect();
    Ok(FragmentString::from_parts(fragments, c.closed))
}
