use super::{LogicError, Vocabulary};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Interpretation of one relation symbol: a set of arity-tuples over `[n]`,
/// stored as a bitset indexed by mixed-radix tuple encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    n: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(arity: usize, n: usize) -> Self {
        let size = n.pow(arity as u32);
        Relation {
            arity,
            n,
            bits: vec![0; size.div_ceil(64)],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of possible tuples, i.e. `n^arity`.
    pub fn capacity(&self) -> usize {
        self.n.pow(self.arity as u32)
    }

    fn index(&self, tuple: &[u32]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        let mut idx = 0usize;
        for &t in tuple {
            debug_assert!(t >= 1 && t as usize <= self.n);
            idx = idx * self.n + (t as usize - 1);
        }
        idx
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        let i = self.index(tuple);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, tuple: &[u32]) {
        let i = self.index(tuple);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    /// Overwrite the whole interpretation from a tuple-indicator mask
    /// (bit `i` set iff the tuple with mixed-radix code `i` is present).
    /// Only valid when `n^arity <= 64`.
    pub fn set_mask(&mut self, mask: u64) {
        debug_assert!(self.capacity() <= 64);
        if self.bits.is_empty() {
            // n = 0: the only interpretation is the empty relation
            debug_assert_eq!(mask, 0);
            return;
        }
        self.bits[0] = mask;
        for w in self.bits.iter_mut().skip(1) {
            *w = 0;
        }
    }

    pub fn from_tuples(arity: usize, n: usize, tuples: &[Vec<u32>]) -> Result<Self, LogicError> {
        let mut rel = Relation::empty(arity, n);
        for t in tuples {
            for &e in t {
                if e == 0 || e as usize > n {
                    return Err(LogicError::ElementOutOfRange { entry: e, n });
                }
            }
            if t.len() != arity {
                return Err(LogicError::ArityMismatch {
                    symbol: String::new(),
                    expected: arity,
                    got: t.len(),
                });
            }
            rel.insert(t);
        }
        Ok(rel)
    }

    /// Tuples present, in increasing mixed-radix order.
    pub fn tuples(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for i in 0..self.capacity() {
            if self.bits[i / 64] >> (i % 64) & 1 == 1 {
                let mut tuple = vec![0u32; self.arity];
                let mut rest = i;
                for k in (0..self.arity).rev() {
                    tuple[k] = (rest % self.n) as u32 + 1;
                    rest /= self.n;
                }
                out.push(tuple);
            }
        }
        out
    }

    pub fn count_tuples(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Membership mask of a unary relation over a universe of at most 64
    /// elements (bit `e-1` for element `e`).
    pub fn unary_mask(&self) -> u64 {
        debug_assert!(self.arity == 1 && self.n <= 64);
        self.bits.first().copied().unwrap_or(0)
    }
}

/// A finite relational structure with universe `[n] = {1..n}` and an
/// optional linear order interpreting `<`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    n: usize,
    interps: BTreeMap<String, Relation>,
    /// `ranks[e-1]` is the rank (1-based) of element `e`; present only for
    /// ordered structures.
    order: Option<Vec<u32>>,
}

impl Structure {
    pub fn new(n: usize) -> Self {
        Structure {
            n,
            interps: BTreeMap::new(),
            order: None,
        }
    }

    /// Structure with empty interpretations for every vocabulary symbol.
    pub fn empty_for(vocab: &Vocabulary, n: usize) -> Self {
        let mut s = Structure::new(n);
        for decl in vocab.symbols() {
            s.interps
                .insert(decl.name.clone(), Relation::empty(decl.arity, n));
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set_relation(&mut self, name: &str, rel: Relation) {
        self.interps.insert(name.to_string(), rel);
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.interps.get(name)
    }

    pub fn relation_mut(&mut self, name: &str) -> Option<&mut Relation> {
        self.interps.get_mut(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&String, &Relation)> {
        self.interps.iter()
    }

    /// Install a linear order given as the sequence of elements from least
    /// to greatest (e.g. `[3,1,2]` makes 3 the minimum).
    pub fn set_order_sequence(&mut self, seq: &[u32]) -> Result<(), LogicError> {
        let ranks = sequence_to_ranks(seq, self.n)?;
        self.order = Some(ranks);
        Ok(())
    }

    /// Install the natural order `1 < 2 < ... < n`.
    pub fn set_natural_order(&mut self) {
        self.order = Some((1..=self.n as u32).collect());
    }

    pub fn clear_order(&mut self) {
        self.order = None;
    }

    pub fn has_order(&self) -> bool {
        self.order.is_some()
    }

    /// Rank of element `e` under the installed order (1-based).
    pub fn rank(&self, e: u32) -> u32 {
        self.order.as_ref().expect("structure has order")[e as usize - 1]
    }

    pub fn order_ranks(&self) -> Option<&[u32]> {
        self.order.as_deref()
    }

    pub fn lt(&self, a: u32, b: u32) -> bool {
        let ranks = self.order.as_ref().expect("structure has order");
        ranks[a as usize - 1] < ranks[b as usize - 1]
    }
}

/// Convert an element sequence (least to greatest) into a rank vector.
pub(crate) fn sequence_to_ranks(seq: &[u32], n: usize) -> Result<Vec<u32>, LogicError> {
    if seq.len() != n {
        return Err(LogicError::OrderNotPermutation);
    }
    let mut ranks = vec![0u32; n];
    for (pos, &e) in seq.iter().enumerate() {
        if e == 0 || e as usize > n || ranks[e as usize - 1] != 0 {
            return Err(LogicError::OrderNotPermutation);
        }
        ranks[e as usize - 1] = pos as u32 + 1;
    }
    Ok(ranks)
}

/// JSON form of a structure, matching the documented external format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureJson {
    pub n: usize,
    pub relations: BTreeMap<String, Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<u32>,
}

impl Structure {
    pub fn to_json_value(&self, point: Option<u32>) -> StructureJson {
        StructureJson {
            n: self.n,
            relations: self
                .interps
                .iter()
                .map(|(k, v)| (k.clone(), v.tuples()))
                .collect(),
            point,
        }
    }

    pub fn from_json_value(
        j: &StructureJson,
        vocab: &Vocabulary,
    ) -> Result<(Self, Option<u32>), LogicError> {
        let mut s = Structure::empty_for(vocab, j.n);
        for (name, tuples) in &j.relations {
            let decl = vocab
                .symbol(name)
                .ok_or_else(|| LogicError::UnknownSymbol(name.clone()))?;
            let rel = Relation::from_tuples(decl.arity, j.n, tuples).map_err(|e| match e {
                LogicError::ArityMismatch { expected, got, .. } => LogicError::ArityMismatch {
                    symbol: name.clone(),
                    expected,
                    got,
                },
                other => other,
            })?;
            s.set_relation(name, rel);
        }
        if let Some(p) = j.point {
            if p == 0 || p as usize > j.n {
                return Err(LogicError::ElementOutOfRange { entry: p, n: j.n });
            }
        }
        Ok((s, j.point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_bits_round_trip() {
        let mut r = Relation::empty(2, 3);
        r.insert(&[1, 2]);
        r.insert(&[3, 3]);
        assert!(r.contains(&[1, 2]));
        assert!(!r.contains(&[2, 1]));
        assert_eq!(r.tuples(), vec![vec![1, 2], vec![3, 3]]);
        assert_eq!(r.count_tuples(), 2);
    }

    #[test]
    fn order_sequence_to_ranks() {
        let mut s = Structure::new(3);
        s.set_order_sequence(&[3, 1, 2]).unwrap();
        assert!(s.lt(3, 1));
        assert!(s.lt(1, 2));
        assert!(!s.lt(2, 3));
        assert!(s.set_order_sequence(&[1, 1, 2]).is_err());
    }

    #[test]
    fn out_of_range_tuple_rejected() {
        assert!(Relation::from_tuples(2, 2, &[vec![1, 3]]).is_err());
    }
}
