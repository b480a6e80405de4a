use super::WordsError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};

/// A total deterministic automaton over the alphabet `2^width`: a letter is
/// the bitmask of unary symbols (and, during compilation, variable tracks)
/// present at one position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    width: usize,
    initial: usize,
    accepting: Vec<bool>,
    /// row-major: `delta[state * alphabet + letter]`
    delta: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
}

impl Dfa {
    pub fn new(
        width: usize,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<u32>,
    ) -> Dfa {
        let states = accepting.len();
        assert!(initial < states);
        assert_eq!(delta.len(), states << width, "transition table must be total");
        assert!(
            delta.iter().all(|&q| (q as usize) < states),
            "transition target out of range"
        );
        Dfa {
            width,
            initial,
            accepting,
            delta,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn alphabet_size(&self) -> usize {
        1 << self.width
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: usize, letter: usize) -> usize {
        self.delta[(q << self.width) | letter] as usize
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut q = self.initial;
        for &l in word {
            q = self.next(q, l);
        }
        self.accepting[q]
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            width: self.width,
            initial: self.initial,
            accepting: self.accepting.iter().map(|a| !a).collect(),
            delta: self.delta.clone(),
        }
    }

    /// Product automaton under a boolean combination of acceptance.
    pub fn product(&self, other: &Dfa, op: BoolOp) -> Result<Dfa, WordsError> {
        if self.width != other.width {
            return Err(WordsError::WidthMismatch);
        }
        let alphabet = self.alphabet_size();
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut delta: Vec<u32> = Vec::new();
        let start = (self.initial, other.initial);
        index.insert(start, 0);
        order.push(start);
        let mut queue = VecDeque::from([start]);
        while let Some((a, b)) = queue.pop_front() {
            for l in 0..alphabet {
                let t = (self.next(a, l), other.next(b, l));
                let next_id = *index.entry(t).or_insert_with(|| {
                    order.push(t);
                    queue.push_back(t);
                    order.len() - 1
                });
                delta.push(next_id as u32);
            }
        }
        let accepting = order
            .iter()
            .map(|&(a, b)| match op {
                BoolOp::And => self.accepting[a] && other.accepting[b],
                BoolOp::Or => self.accepting[a] || other.accepting[b],
            })
            .collect();
        Ok(Dfa {
            width: self.width,
            initial: 0,
            accepting,
            delta,
        })
    }

    /// Language-equivalent minimal automaton with canonical (breadth-first)
    /// state numbering.
    pub fn minimize(&self) -> Dfa {
        let trimmed = self.trim_reachable();
        let states = trimmed.num_states();
        let alphabet = trimmed.alphabet_size();
        let mut class: Vec<usize> = trimmed
            .accepting
            .iter()
            .map(|&a| usize::from(a))
            .collect();
        let mut class_count = 2;
        loop {
            let mut sig_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let mut next_class = vec![0usize; states];
            for q in 0..states {
                let mut sig = Vec::with_capacity(alphabet + 1);
                sig.push(class[q]);
                for l in 0..alphabet {
                    sig.push(class[trimmed.next(q, l)]);
                }
                let id = sig_index.len();
                let id = *sig_index.entry(sig).or_insert(id);
                next_class[q] = id;
            }
            let next_count = sig_index.len();
            class = next_class;
            if next_count == class_count {
                break;
            }
            class_count = next_count;
        }
        // quotient automaton on classes
        let mut q_delta = vec![0u32; class_count << trimmed.width];
        let mut q_accept = vec![false; class_count];
        for q in 0..states {
            let c = class[q];
            q_accept[c] = trimmed.accepting[q];
            for l in 0..alphabet {
                q_delta[(c << trimmed.width) | l] = class[trimmed.next(q, l)] as u32;
            }
        }
        let quotient = Dfa {
            width: trimmed.width,
            initial: class[trimmed.initial],
            accepting: q_accept,
            delta: q_delta,
        };
        quotient.canonicalize()
    }

    fn trim_reachable(&self) -> Dfa {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for l in 0..self.alphabet_size() {
                let t = self.next(q, l);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        let mut renumber = vec![usize::MAX; self.num_states()];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        let mut delta = vec![0u32; order.len() << self.width];
        let mut accepting = vec![false; order.len()];
        for (new, &old) in order.iter().enumerate() {
            accepting[new] = self.accepting[old];
            for l in 0..self.alphabet_size() {
                delta[(new << self.width) | l] = renumber[self.next(old, l)] as u32;
            }
        }
        Dfa {
            width: self.width,
            initial: 0,
            accepting,
            delta,
        }
    }

    /// Deterministic renumbering by breadth-first reachability in letter
    /// order; two isomorphic automata canonicalize to identical tables.
    pub fn canonicalize(&self) -> Dfa {
        self.trim_reachable()
    }

    /// Isomorphism of the reachable parts (for minimized automata this is
    /// language equality).
    pub fn is_isomorphic(&self, other: &Dfa) -> bool {
        self.canonicalize() == other.canonicalize()
    }
}

/// External JSON schema: `s` is the number of unary symbols; letter index is
/// the bitmask of symbols in declaration order; `delta[q][letter]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DfaJson {
    pub s: usize,
    pub states: usize,
    pub initial: usize,
    pub accepting: Vec<usize>,
    pub delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn to_json_struct(&self) -> DfaJson {
        DfaJson {
            s: self.width,
            states: self.num_states(),
            initial: self.initial,
            accepting: (0..self.num_states()).filter(|&q| self.accepting[q]).collect(),
            delta: (0..self.num_states())
                .map(|q| {
                    (0..self.alphabet_size())
                        .map(|l| self.next(q, l))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json_struct(j: &DfaJson) -> Result<Dfa, WordsError> {
        let alphabet = 1usize << j.s;
        if j.delta.len() != j.states
            || j.delta.iter().any(|row| row.len() != alphabet)
            || j.initial >= j.states
            || j.accepting.iter().any(|&q| q >= j.states)
        {
            return Err(WordsError::ValidationFailed {
                context: "dfa json shape",
            });
        }
        let mut accepting = vec![false; j.states];
        for &q in &j.accepting {
            accepting[q] = true;
        }
        let mut delta = Vec::with_capacity(j.states * alphabet);
        for row in &j.delta {
            for &t in row {
                if t >= j.states {
                    return Err(WordsError::ValidationFailed {
                        context: "dfa json transition",
                    });
                }
                delta.push(t as u32);
            }
        }
        Ok(Dfa::new(j.s, j.initial, accepting, delta))
    }
}
