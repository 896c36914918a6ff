//! Mealy machines and the finite-state transformations they define.
//!
//! Letters are 1-based at every public entry point (`1..=k`), matching the
//! wreath-recursion notation. Internally tables are stored flat and 0-based.
//!
//! A [`Transformation`] is always held in canonical form: every state is
//! reachable from the root (state 0), no two states act identically, and
//! states are numbered in breadth-first discovery order with letters taken
//! in increasing order. Two transformations are therefore equal as maps on
//! words exactly when their tables are equal.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A complete, deterministic letter-to-letter transducer.
///
/// State names are presentation metadata only and play no part in
/// canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    alphabet_size: usize,
    names: Vec<String>,
    targets: Vec<usize>,
    outputs: Vec<u32>,
}

impl MealyMachine {
    pub fn new(alphabet_size: usize) -> Self {
        assert!(alphabet_size >= 1, "alphabet must be nonempty");
        MealyMachine {
            alphabet_size,
            names: Vec::new(),
            targets: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Appends a state with the given successor states (0-based indices) and
    /// output letters (1-based). Returns the new state's index.
    ///
    /// Successor indices may refer to states added later; they are checked
    /// when the machine is canonicalized.
    pub fn add_state(
        &mut self,
        name: impl Into<String>,
        targets: &[usize],
        outputs: &[usize],
    ) -> Result<usize> {
        let k = self.alphabet_size;
        for len in [targets.len(), outputs.len()] {
            if len != k {
                return Err(Error::AlphabetMismatch {
                    left: k,
                    right: len,
                });
            }
        }
        for &y in outputs {
            check_letter(y, k)?;
        }
        self.names.push(name.into());
        self.targets.extend_from_slice(targets);
        self.outputs.extend(outputs.iter().map(|&y| (y - 1) as u32));
        Ok(self.names.len() - 1)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Minimizes the machine rooted at `root` and renumbers it canonically.
    ///
    /// Moore partition refinement: states start grouped by output row and
    /// are split by successor classes until the partition is stable.
    pub fn canonicalize(&self, root: usize) -> Result<Transformation> {
        let n = self.state_count();
        if root >= n {
            return Err(Error::InvalidStateIndex {
                index: root,
                states: n,
            });
        }
        if let Some(&bad) = self.targets.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidStateIndex {
                index: bad,
                states: n,
            });
        }
        let targets: Vec<u32> = self.targets.iter().map(|&q| q as u32).collect();
        Ok(minimize(self.alphabet_size, &targets, &self.outputs, root))
    }
}

/// A finite-state transformation of `Σ*` in canonical form, rooted at state 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    alphabet_size: usize,
    targets: Vec<u32>,
    outputs: Vec<u32>,
}

impl Transformation {
    /// The identity transformation over `1..=alphabet_size`.
    pub fn identity(alphabet_size: usize) -> Self {
        assert!(alphabet_size >= 1, "alphabet must be nonempty");
        Transformation {
            alphabet_size,
            targets: vec![0; alphabet_size],
            outputs: (0..alphabet_size as u32).collect(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn state_count(&self) -> usize {
        self.targets.len() / self.alphabet_size
    }

    /// Output letter of `state` on input `letter` (both letters 1-based).
    pub fn output(&self, state: usize, letter: usize) -> usize {
        self.outputs[state * self.alphabet_size + letter - 1] as usize + 1
    }

    /// Successor of `state` on input `letter` (1-based).
    pub fn target(&self, state: usize, letter: usize) -> usize {
        self.targets[state * self.alphabet_size + letter - 1] as usize
    }

    pub(crate) fn out0(&self, state: usize, x: usize) -> usize {
        self.outputs[state * self.alphabet_size + x] as usize
    }

    pub(crate) fn to0(&self, state: usize, x: usize) -> usize {
        self.targets[state * self.alphabet_size + x] as usize
    }

    /// The one-letter map `σ` induced by the root, as 1-based letters.
    pub fn letter_map(&self) -> Vec<usize> {
        (1..=self.alphabet_size)
            .map(|x| self.output(0, x))
            .collect()
    }

    pub fn apply(&self, word: &[usize]) -> Result<Vec<usize>> {
        let mut state = 0;
        let mut image = Vec::with_capacity(word.len());
        for &x in word {
            check_letter(x, self.alphabet_size)?;
            image.push(self.output(state, x));
            state = self.target(state, x);
        }
        Ok(image)
    }

    /// The section `t@u`: the transformation applied to suffixes after `u`.
    pub fn section(&self, word: &[usize]) -> Result<Transformation> {
        let mut state = 0;
        for &x in word {
            check_letter(x, self.alphabet_size)?;
            state = self.target(state, x);
        }
        Ok(self.rooted_at(state))
    }

    /// State reached from the root by reading `word`.
    pub fn state_after(&self, word: &[usize]) -> Result<usize> {
        let mut state = 0;
        for &x in word {
            check_letter(x, self.alphabet_size)?;
            state = self.target(state, x);
        }
        Ok(state)
    }

    /// The transformation induced by one of this machine's states.
    ///
    /// Any state of a minimal machine roots a minimal machine, so only the
    /// renumbering has to be redone.
    pub fn rooted_at(&self, state: usize) -> Transformation {
        if state == 0 {
            return self.clone();
        }
        let k = self.alphabet_size;
        let n = self.state_count();
        let mut number = vec![u32::MAX; n];
        let mut order = vec![state];
        number[state] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for x in 0..k {
                let r = self.to0(q, x);
                if number[r] == u32::MAX {
                    number[r] = order.len() as u32;
                    order.push(r);
                }
            }
            i += 1;
        }
        let mut targets = Vec::with_capacity(order.len() * k);
        let mut outputs = Vec::with_capacity(order.len() * k);
        for &q in &order {
            for x in 0..k {
                targets.push(number[self.to0(q, x)]);
                outputs.push(self.out0(q, x) as u32);
            }
        }
        Transformation {
            alphabet_size: k,
            targets,
            outputs,
        }
    }

    /// The product that applies `self` first and `other` second.
    ///
    /// Product states are pairs `(p, q)`; on input `x`, `p` emits `y` and
    /// `q` reads `y`. Only pairs reachable from the roots are built.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        self.compose_capped(other, usize::MAX)
    }

    /// [`compose`](Self::compose), failing with [`Error::StateBlowup`] once
    /// the unminimized product has more than `max_states` states.
    pub fn compose_capped(
        &self,
        other: &Transformation,
        max_states: usize,
    ) -> Result<Transformation> {
        let k = self.alphabet_size;
        if other.alphabet_size != k {
            return Err(Error::AlphabetMismatch {
                left: k,
                right: other.alphabet_size,
            });
        }
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(0u32, 0u32)];
        index.insert((0, 0), 0);
        let mut targets = Vec::new();
        let mut outputs = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for x in 0..k {
                let y = self.out0(p as usize, x);
                let z = other.out0(q as usize, y);
                let next = (
                    self.to0(p as usize, x) as u32,
                    other.to0(q as usize, y) as u32,
                );
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if pairs.len() >= max_states {
                            return Err(Error::StateBlowup { limit: max_states });
                        }
                        pairs.push(next);
                        index.insert(next, (pairs.len() - 1) as u32);
                        (pairs.len() - 1) as u32
                    }
                };
                targets.push(id);
                outputs.push(z as u32);
            }
            i += 1;
        }
        Ok(minimize(k, &targets, &outputs, 0))
    }

    /// `self` composed with itself `n` times; `n = 0` gives the identity.
    ///
    /// Every intermediate product is minimized.
    pub fn power(&self, n: u64) -> Transformation {
        self.power_capped(n, usize::MAX).expect("uncapped")
    }

    /// [`power`](Self::power) with every product capped as in
    /// [`compose_capped`](Self::compose_capped).
    pub fn power_capped(&self, n: u64, max_states: usize) -> Result<Transformation> {
        let mut result: Option<Transformation> = None;
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.compose_capped(&base, max_states)?,
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.compose_capped(&base, max_states)?;
            }
        }
        Ok(result.unwrap_or_else(|| Transformation::identity(self.alphabet_size)))
    }

    /// Canonical equality. Fails only when the alphabets differ.
    pub fn equal(&self, other: &Transformation) -> Result<bool> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet_size,
                right: other.alphabet_size,
            });
        }
        Ok(self == other)
    }

    pub fn is_identity(&self) -> bool {
        self.state_count() == 1 && self.is_identity_state(0)
    }

    pub fn is_identity_state(&self, state: usize) -> bool {
        (0..self.alphabet_size).all(|x| self.out0(state, x) == x && self.to0(state, x) == state)
    }

    /// Index of the identity state, if the machine contains one.
    pub fn identity_state(&self) -> Option<usize> {
        (0..self.state_count()).find(|&q| self.is_identity_state(q))
    }

    /// Converts back into a plain machine whose states are named by `name`.
    pub fn to_machine(&self, mut name: impl FnMut(usize) -> String) -> MealyMachine {
        let k = self.alphabet_size;
        MealyMachine {
            alphabet_size: k,
            names: (0..self.state_count()).map(&mut name).collect(),
            targets: self.targets.iter().map(|&q| q as usize).collect(),
            outputs: self.outputs.clone(),
        }
    }

    /// The canonical text form:
    ///
    /// ```text
    /// k=<alphabet_size>
    /// state <i>: out=[y1,...,yk] to=[q1,...,qk]
    /// ```
    ///
    /// one `state` line per state in canonical order, each line ending in
    /// `\n`. Output letters are 1-based, state indices 0-based.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.alphabet_size;
        writeln!(f, "k={k}")?;
        for q in 0..self.state_count() {
            write!(f, "state {q}: out=[")?;
            for x in 0..k {
                if x > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.out0(q, x) + 1)?;
            }
            f.write_str("] to=[")?;
            for x in 0..k {
                if x > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.to0(q, x))?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

pub(crate) fn check_letter(letter: usize, alphabet_size: usize) -> Result<()> {
    if letter == 0 || letter > alphabet_size {
        Err(Error::LetterOutOfRange {
            letter,
            alphabet_size,
        })
    } else {
        Ok(())
    }
}

fn minimize(k: usize, targets: &[u32], outputs: &[u32], root: usize) -> Transformation {
    let n = targets.len() / k;

    // restrict to states reachable from the root
    let mut local = vec![u32::MAX; n];
    let mut order = vec![root];
    local[root] = 0;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        for &r in &targets[q * k..(q + 1) * k] {
            if local[r as usize] == u32::MAX {
                local[r as usize] = order.len() as u32;
                order.push(r as usize);
            }
        }
        i += 1;
    }
    let r = order.len();
    let mut to = Vec::with_capacity(r * k);
    let mut out = Vec::with_capacity(r * k);
    for &q in &order {
        to.extend(
            targets[q * k..(q + 1) * k]
                .iter()
                .map(|&t| local[t as usize]),
        );
        out.extend_from_slice(&outputs[q * k..(q + 1) * k]);
    }

    let mut class = vec![0u32; r];
    let mut count = {
        let mut ids: HashMap<&[u32], u32> = HashMap::new();
        for q in 0..r {
            let fresh = ids.len() as u32;
            class[q] = *ids.entry(&out[q * k..(q + 1) * k]).or_insert(fresh);
        }
        ids.len()
    };
    let mut sig = Vec::with_capacity(k + 1);
    loop {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count);
        let mut next = vec![0u32; r];
        for q in 0..r {
            sig.clear();
            sig.push(class[q]);
            sig.extend(to[q * k..(q + 1) * k].iter().map(|&t| class[t as usize]));
            let fresh = ids.len() as u32;
            next[q] = match ids.get(&sig) {
                Some(&c) => c,
                None => {
                    ids.insert(sig.clone(), fresh);
                    fresh
                }
            };
        }
        class = next;
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }

    // breadth-first renumbering of the quotient from the root's class
    let mut rep = vec![0usize; count];
    for q in (0..r).rev() {
        rep[class[q] as usize] = q;
    }
    let mut number = vec![u32::MAX; count];
    let mut queue = vec![class[0] as usize];
    number[class[0] as usize] = 0;
    let mut i = 0;
    while i < queue.len() {
        let q = rep[queue[i]];
        for &t in &to[q * k..(q + 1) * k] {
            let c = class[t as usize] as usize;
            if number[c] == u32::MAX {
                number[c] = queue.len() as u32;
                queue.push(c);
            }
        }
        i += 1;
    }
    let mut new_targets = Vec::with_capacity(queue.len() * k);
    let mut new_outputs = Vec::with_capacity(queue.len() * k);
    for &c in &queue {
        let q = rep[c];
        new_targets.extend(
            to[q * k..(q + 1) * k]
                .iter()
                .map(|&t| number[class[t as usize] as usize]),
        );
        new_outputs.extend_from_slice(&out[q * k..(q + 1) * k]);
    }
    Transformation {
        alphabet_size: k,
        targets: new_targets,
        outputs: new_outputs,
    }
}

/// All words of a given length over `1..=k`, in lexicographic order.
#[derive(Debug, Clone)]
pub struct Words {
    alphabet_size: usize,
    current: Option<Vec<usize>>,
}

impl Words {
    pub fn new(alphabet_size: usize, length: usize) -> Self {
        Words {
            alphabet_size,
            current: Some(vec![1; length]),
        }
    }
}

impl Iterator for Words {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let word = self.current.take()?;
        let mut next = word.clone();
        for i in (0..next.len()).rev() {
            if next[i] < self.alphabet_size {
                next[i] += 1;
                self.current = Some(next);
                return Some(word);
            }
            next[i] = 1;
        }
        Some(word)
    }
}
