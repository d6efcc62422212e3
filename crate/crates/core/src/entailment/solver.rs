//! A small DPLL solver: two-watched-literal unit propagation, chronological
//! backtracking, branching on the lowest-numbered unassigned variable with
//! `true` tried first.

/// A literal: variable index shifted left once, low bit set when negated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: usize, positive: bool) -> Lit {
        Lit(((var as u32) << 1) | u32::from(!positive))
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negated(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    fn code(self) -> usize {
        self.0 as usize
    }
}

pub type Clause = Vec<Lit>;

/// Sorts, deduplicates and drops tautologies. `None` means the clause is
/// trivially satisfied.
pub fn normalize_clause(mut clause: Clause) -> Option<Clause> {
    clause.sort_unstable();
    clause.dedup();
    if clause.windows(2).any(|w| w[0].var() == w[1].var()) {
        None
    } else {
        Some(clause)
    }
}

const UNASSIGNED: i8 = -1;

struct Dpll {
    clauses: Vec<Clause>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<Lit>,
    qhead: usize,
    /// Trail positions of decisions, with whether the opposite branch was tried.
    decisions: Vec<(usize, bool)>,
}

impl Dpll {
    fn lit_value(&self, lit: Lit) -> i8 {
        match self.value[lit.var()] {
            UNASSIGNED => UNASSIGNED,
            v => (v == 1) as i8 ^ (!lit.is_positive()) as i8,
        }
    }

    fn enqueue(&mut self, lit: Lit) {
        self.value[lit.var()] = lit.is_positive() as i8;
        self.trail.push(lit);
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead].negated();
            self.qhead += 1;
            let mut watchers = std::mem::take(&mut self.watches[falsified.code()]);
            let mut i = 0;
            let mut conflict = false;
            while i < watchers.len() {
                let ci = watchers[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.value[first.var()] != UNASSIGNED
                    && ((self.value[first.var()] == 1) == first.is_positive())
                {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let v = self.value[l.var()];
                    if v == UNASSIGNED || ((v == 1) == l.is_positive()) {
                        clause.swap(1, k);
                        self.watches[clause[1].code()].push(ci);
                        watchers.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                match self.lit_value(first) {
                    UNASSIGNED => {
                        self.enqueue(first);
                        i += 1;
                    }
                    _ => {
                        conflict = true;
                        break;
                    }
                }
            }
            self.watches[falsified.code()] = watchers;
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, trail_len: usize) {
        for lit in self.trail.drain(trail_len..) {
            self.value[lit.var()] = UNASSIGNED;
        }
        self.qhead = trail_len;
    }

    /// Backtracks to the most recent decision whose other branch is untried
    /// and takes it. Returns false when the search space is exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some((pos, flipped)) = self.decisions.pop() {
            let lit = self.trail[pos];
            self.undo_to(pos);
            if !flipped {
                self.decisions.push((pos, true));
                self.enqueue(lit.negated());
                return true;
            }
        }
        false
    }

    fn run(mut self) -> Option<Vec<bool>> {
        let mut next_var = 0;
        loop {
            if !self.propagate() {
                if !self.backtrack() {
                    return None;
                }
                next_var = 0;
                continue;
            }
            while next_var < self.value.len() && self.value[next_var] != UNASSIGNED {
                next_var += 1;
            }
            if next_var == self.value.len() {
                return Some(self.value.iter().map(|&v| v == 1).collect());
            }
            self.decisions.push((self.trail.len(), false));
            self.enqueue(Lit::new(next_var, true));
        }
    }
}

/// Finds a satisfying assignment of `clauses` over `num_vars` variables.
pub fn solve(num_vars: usize, clauses: impl IntoIterator<Item = Clause>) -> Option<Vec<bool>> {
    let mut dpll = Dpll {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * num_vars],
        value: vec![UNASSIGNED; num_vars],
        trail: Vec::new(),
        qhead: 0,
        decisions: Vec::new(),
    };
    let mut units = Vec::new();
    for clause in clauses {
        debug_assert!(clause.iter().all(|l| l.var() < num_vars));
        match clause.len() {
            0 => return None,
            1 => units.push(clause[0]),
            _ => {
                let ci = dpll.clauses.len();
                dpll.watches[clause[0].code()].push(ci);
                dpll.watches[clause[1].code()].push(ci);
                dpll.clauses.push(clause);
            }
        }
    }
    for u in units {
        match dpll.lit_value(u) {
            UNASSIGNED => dpll.enqueue(u),
            1 => {}
            _ => return None,
        }
    }
    dpll.run()
}
