//! Exhaustive search for r-regular words of a given length.
//!
//! The search assigns positions 1..=m to letters left to right. Three
//! prunes keep it sharp:
//!
//! * block-size cap: an r-regular word (r >= 0) gives every letter exactly
//!   m/b positions, so a letter at its cap takes no more;
//! * canonical order: with `canonical_only`, position i may only use a
//!   letter at most one past the largest letter seen so far, which picks
//!   the lexicographic representative of each letter-permutation orbit;
//! * power-sum windows: for each letter and degree j <= r, the final sum
//!   of j-th powers must hit T_j / b exactly, and the positions still to
//!   come form a contiguous suffix, so the smallest and largest
//!   achievable completions bracket the target or the branch dies.
//!
//! Everything is exact i128 arithmetic; instances whose power sums would
//! not fit are rejected up front rather than silently rounded.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{Word, MAX_ALPHABET};

/// What to search for: r-regular words of length `length` over
/// `alphabet_size` letters. `canonical_only` (the default) keeps one word
/// per letter-permutation orbit; `jobs` > 1 splits the search by prefix
/// with results merged back in lexicographic order, so the output never
/// depends on scheduling.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    length: usize,
    alphabet_size: usize,
    regularity: i32,
    canonical_only: bool,
    jobs: usize,
}

impl SearchSpec {
    pub fn new(length: usize, alphabet_size: usize, regularity: i32) -> Result<SearchSpec> {
        if alphabet_size < 2 || alphabet_size > MAX_ALPHABET {
            return Err(Error::InvalidSearch(format!(
                "alphabet size {alphabet_size} out of range 2..={MAX_ALPHABET}"
            )));
        }
        if regularity < -1 {
            return Err(Error::InvalidSearch(format!(
                "regularity {regularity} below -1"
            )));
        }
        Ok(SearchSpec {
            length,
            alphabet_size,
            regularity,
            canonical_only: true,
            jobs: 1,
        })
    }

    /// Enumerate all letterings, not one per orbit.
    pub fn all_labelings(mut self) -> SearchSpec {
        self.canonical_only = false;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Result<SearchSpec> {
        if jobs == 0 {
            return Err(Error::InvalidSearch("jobs must be at least 1".into()));
        }
        self.jobs = jobs;
        Ok(self)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn regularity(&self) -> i32 {
        self.regularity
    }

    pub fn canonical_only(&self) -> bool {
        self.canonical_only
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    /// r >= 0 forces equal block sizes, so b must divide m for the stream
    /// to be nonempty.
    pub fn divisible(&self) -> bool {
        self.regularity < 0 || self.length % self.alphabet_size == 0
    }
}

/// All matching words in lexicographic order.
pub fn enumerate_pte(spec: &SearchSpec) -> Result<Vec<Word>> {
    let Some(searcher) = Searcher::build(spec)? else {
        return Ok(trivial_words(spec));
    };
    if spec.jobs > 1 {
        let tasks = searcher.prefix_tasks(spec.jobs);
        let results = run_tasks(&searcher, tasks, spec.jobs, |searcher, state| {
            let mut words = Vec::new();
            searcher.dfs(state, &mut |letters| {
                words.push(word_from(searcher.b, letters));
                ControlFlow::Continue(())
            });
            words
        });
        return Ok(results.into_iter().flatten().collect());
    }
    let mut words = Vec::new();
    searcher.dfs(searcher.root(), &mut |letters| {
        words.push(word_from(searcher.b, letters));
        ControlFlow::Continue(())
    });
    Ok(words)
}

/// How many words the enumeration would yield, without keeping them.
pub fn count_pte(spec: &SearchSpec) -> Result<u64> {
    let Some(searcher) = Searcher::build(spec)? else {
        return Ok(trivial_words(spec).len() as u64);
    };
    if spec.jobs > 1 {
        let tasks = searcher.prefix_tasks(spec.jobs);
        let results = run_tasks(&searcher, tasks, spec.jobs, |searcher, state| {
            let mut n = 0u64;
            searcher.dfs(state, &mut |_| {
                n += 1;
                ControlFlow::Continue(())
            });
            n
        });
        return Ok(results.into_iter().sum());
    }
    let mut n = 0u64;
    searcher.dfs(searcher.root(), &mut |_| {
        n += 1;
        ControlFlow::Continue(())
    });
    Ok(n)
}

/// The lexicographically first matching word, if any. Always serial: the
/// leftmost branch usually resolves long before a split would pay off.
pub fn first_pte(spec: &SearchSpec) -> Result<Option<Word>> {
    let Some(searcher) = Searcher::build(spec)? else {
        return Ok(trivial_words(spec).into_iter().next());
    };
    let mut found = None;
    searcher.dfs(searcher.root(), &mut |letters| {
        found = Some(word_from(searcher.b, letters));
        ControlFlow::Break(())
    });
    Ok(found)
}

/// Smallest m <= cap with a nonempty stream, scanning multiples of b.
pub fn min_length(alphabet_size: usize, regularity: i32, cap: usize) -> Result<Option<usize>> {
    let mut m = alphabet_size;
    while m <= cap {
        let spec = SearchSpec::new(m, alphabet_size, regularity)?;
        if first_pte(&spec)?.is_some() {
            return Ok(Some(m));
        }
        m += alphabet_size;
    }
    Ok(None)
}

/// Checks every canonical word of length m directly against the power-sum
/// definition of regularity. No target arithmetic, no window pruning: this
/// is the independent oracle the fast enumerator is measured against.
/// Guarded to b^m <= 10^8 candidates.
pub fn brute_force_oracle(
    length: usize,
    alphabet_size: usize,
    regularity: i32,
) -> Result<Vec<Word>> {
    let spec = SearchSpec::new(length, alphabet_size, regularity)?;
    let candidates = (alphabet_size as u128)
        .checked_pow(length as u32)
        .filter(|&n| n <= 100_000_000)
        .ok_or_else(|| {
            Error::TooLarge(format!(
                "{alphabet_size}^{length} candidates exceed the 10^8 oracle guard"
            ))
        })?;
    let _ = candidates;
    let mut out = Vec::new();
    let mut letters = vec![0u8; length];
    oracle_dfs(&spec, 0, 0, &mut letters, &mut out);
    Ok(out)
}

fn oracle_dfs(spec: &SearchSpec, pos: usize, used: usize, letters: &mut [u8], out: &mut Vec<Word>) {
    if pos == letters.len() {
        let word = word_from(spec.alphabet_size, letters);
        if word.is_regular(spec.regularity) {
            out.push(word);
        }
        return;
    }
    let limit = (used + 1).min(spec.alphabet_size);
    for x in 0..limit as u8 {
        letters[pos] = x;
        oracle_dfs(spec, pos + 1, used.max(x as usize + 1), letters, out);
    }
}

/// Distinct words reachable from `word` by renaming letters: b!/(b-k)! for
/// k distinct letters used. A letter permutation fixes a word only when it
/// fixes every used letter, so the action on used-letter injections is
/// free.
pub fn labeling_count(word: &Word) -> u128 {
    let b = word.alphabet_size();
    let mut seen = [false; MAX_ALPHABET];
    for &l in word.letters() {
        seen[l as usize] = true;
    }
    let k = seen.iter().filter(|&&s| s).count();
    ((b - k + 1)..=b).map(|v| v as u128).product()
}

/// One summary object for a finished search.
#[derive(Debug, Clone, Serialize)]
pub struct EnumerationReport {
    pub m: usize,
    pub b: usize,
    pub r: i32,
    pub canonical_count: u64,
    pub total_count: u128,
    pub divisible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub words: Option<Vec<String>>,
}

/// Runs the search described by `spec` and accounts both the canonical
/// count and the total over all letterings; `include_words` additionally
/// lists the matching words.
pub fn report(spec: &SearchSpec, include_words: bool) -> Result<EnumerationReport> {
    let canonical_spec = spec.clone();
    let canonical_spec = SearchSpec {
        canonical_only: true,
        ..canonical_spec
    };
    let canonical = enumerate_pte(&canonical_spec)?;
    let canonical_count = canonical.len() as u64;
    let total_count: u128 = canonical.iter().map(labeling_count).sum();
    let words = if include_words {
        if spec.canonical_only {
            Some(canonical.iter().map(Word::to_string).collect())
        } else {
            Some(enumerate_pte(spec)?.iter().map(Word::to_string).collect())
        }
    } else {
        None
    };
    Ok(EnumerationReport {
        m: spec.length,
        b: spec.alphabet_size,
        r: spec.regularity,
        canonical_count,
        total_count,
        divisible: spec.divisible(),
        words,
    })
}

/// Degenerate streams that need no search machinery: emptiness by
/// divisibility or length, and the r = -1 case on the empty word.
fn trivial_words(spec: &SearchSpec) -> Vec<Word> {
    if spec.regularity < 0 && spec.length == 0 {
        return vec![Word::new(spec.alphabet_size, vec![]).expect("empty word")];
    }
    Vec::new()
}

fn word_from(alphabet_size: usize, letters: &[u8]) -> Word {
    Word::new(alphabet_size, letters.to_vec()).expect("search letters stay in range")
}

/// A search node: the prefix assigned so far plus its running statistics.
#[derive(Clone)]
struct State {
    letters: Vec<u8>,
    counts: Vec<usize>,
    sums: Vec<Vec<i128>>,
    used: usize,
}

struct Searcher {
    m: usize,
    b: usize,
    r: usize,
    cap: usize,
    canonical: bool,
    /// pow[t][j] = t^j for positions t = 0..=m.
    pow: Vec<Vec<i128>>,
    /// prefix[j][t] = 1^j + ... + t^j.
    prefix: Vec<Vec<i128>>,
    /// target[j] = T_j / b.
    target: Vec<i128>,
    /// With regularity -1 there are no power constraints at all.
    unconstrained: bool,
}

impl Searcher {
    /// None means the stream is degenerate (handled by `trivial_words`).
    fn build(spec: &SearchSpec) -> Result<Option<Searcher>> {
        let (m, b) = (spec.length, spec.alphabet_size);
        if spec.regularity < 0 {
            if m == 0 {
                return Ok(None);
            }
            return Ok(Some(Searcher {
                m,
                b,
                r: 0,
                cap: m,
                canonical: spec.canonical_only,
                pow: Vec::new(),
                prefix: Vec::new(),
                target: Vec::new(),
                unconstrained: true,
            }));
        }
        // The empty word is not 0-regular by convention, and unequal
        // blocks are impossible once r >= 0.
        if m == 0 || m % b != 0 {
            return Ok(None);
        }
        let r = spec.regularity as usize;
        let mut pow = vec![vec![0i128; r + 1]; m + 1];
        for (t, row) in pow.iter_mut().enumerate() {
            let mut p = 1i128;
            for entry in row.iter_mut() {
                *entry = p;
                p = p.checked_mul(t as i128).ok_or_else(|| {
                    Error::TooLarge(format!("{t}^{} overflows exact arithmetic", r + 1))
                })?;
            }
        }
        let mut prefix = vec![vec![0i128; m + 1]; r + 1];
        for j in 0..=r {
            for t in 1..=m {
                prefix[j][t] = prefix[j][t - 1].checked_add(pow[t][j]).ok_or_else(|| {
                    Error::TooLarge("power sums overflow exact arithmetic".into())
                })?;
            }
            // Headroom for window arithmetic below.
            if prefix[j][m] > i128::MAX / 4 {
                return Err(Error::TooLarge(
                    "power sums overflow exact arithmetic".into(),
                ));
            }
        }
        let mut target = Vec::with_capacity(r + 1);
        for j in 0..=r {
            let total = prefix[j][m];
            if total % b as i128 != 0 {
                // T_j not divisible by b: the stream is provably empty.
                return Ok(None);
            }
            target.push(total / b as i128);
        }
        Ok(Some(Searcher {
            m,
            b,
            r,
            cap: m / b,
            canonical: spec.canonical_only,
            pow,
            prefix,
            target,
            unconstrained: false,
        }))
    }

    fn root(&self) -> State {
        State {
            letters: Vec::with_capacity(self.m),
            counts: vec![0; self.b],
            sums: vec![vec![0; self.r + 1]; self.b],
            used: 0,
        }
    }

    /// Sum of t^j over t in a..=b within 1..=m.
    fn range_sum(&self, j: usize, a: usize, b: usize) -> i128 {
        if a > b {
            return 0;
        }
        self.prefix[j][b] - self.prefix[j][a - 1]
    }

    /// Can the prefix ending at position `pos` still reach the targets?
    /// The unassigned positions are exactly pos+1..=m, so each letter's
    /// completion is a `need`-subset of that contiguous suffix. Letters
    /// one or two positions short of their cap are decided exactly in
    /// closed form; the rest are screened by suffix windows plus moment
    /// inequalities that couple consecutive degrees.
    fn feasible(&self, pos: usize, counts: &[usize], sums: &[Vec<i128>]) -> bool {
        let l = (pos + 1) as i128;
        let u = self.m as i128;
        for x in 0..self.b {
            let need = self.cap - counts[x];
            let ok = match need {
                0 => self.tail_empty(x, sums),
                1 if self.r >= 1 => self.tail_single(l, u, x, sums),
                2 if self.r >= 2 => self.tail_pair(l, u, x, sums),
                _ => self.tail_window(pos, need, l, u, x, sums),
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// A full letter must already sit exactly on every target.
    fn tail_empty(&self, x: usize, sums: &[Vec<i128>]) -> bool {
        (1..=self.r).all(|j| sums[x][j] == self.target[j])
    }

    /// One position left: it must be t = d_1, inside the suffix, and its
    /// higher powers must close every remaining deficit.
    fn tail_single(&self, l: i128, u: i128, x: usize, sums: &[Vec<i128>]) -> bool {
        let t = self.target[1] - sums[x][1];
        if t < l || t > u {
            return false;
        }
        let trow = &self.pow[t as usize];
        (2..=self.r).all(|j| self.target[j] - sums[x][j] == trow[j])
    }

    /// Two positions left: s + t and s^2 + t^2 determine {s, t} up to the
    /// square root of 2*d_2 - d_1^2, so the pair either exists in the
    /// suffix or the branch dies.
    fn tail_pair(&self, l: i128, u: i128, x: usize, sums: &[Vec<i128>]) -> bool {
        let d1 = self.target[1] - sums[x][1];
        let d2 = self.target[2] - sums[x][2];
        if d1 < 2 * l + 1 || d1 > 2 * u - 1 {
            return false;
        }
        let Some(sq) = d1.checked_mul(d1) else {
            return true;
        };
        let gap2 = 2 * d2 - sq;
        if gap2 <= 0 {
            return false;
        }
        let g = isqrt(gap2 as u128) as i128;
        if g * g != gap2 || (g ^ d1) & 1 != 0 {
            return false;
        }
        let s = (d1 - g) / 2;
        let t = (d1 + g) / 2;
        if s < l || t > u {
            return false;
        }
        let srow = &self.pow[s as usize];
        let trow = &self.pow[t as usize];
        (3..=self.r).all(|j| self.target[j] - sums[x][j] == srow[j] + trow[j])
    }

    /// Necessary conditions for a k-subset of the suffix to close the
    /// deficits: per-degree windows from the smallest and largest slices,
    /// then moment inequalities valid for k positive integers in [l, u]
    /// (with d_0 = k): Cauchy-Schwarz d_j^2 <= d_{j-1} d_{j+1}, the range
    /// quadratic d_{j+1} <= (l+u) d_j - l u d_{j-1}, the floor
    /// d_{j+1} >= l d_j, and for distinct integers the variance bound
    /// 12 k d_2 >= 12 d_1^2 + k^2 (k^2 - 1). Overflowing checks are
    /// skipped, never flipped.
    fn tail_window(&self, pos: usize, need: usize, l: i128, u: i128, x: usize, sums: &[Vec<i128>]) -> bool {
        for j in 1..=self.r {
            let d = self.target[j] - sums[x][j];
            if d < self.range_sum(j, pos + 1, pos + need) {
                return false;
            }
            if d > self.range_sum(j, self.m - need + 1, self.m) {
                return false;
            }
        }
        if self.r < 2 || need == 0 {
            return true;
        }
        let k = need as i128;
        let d1 = self.target[1] - sums[x][1];
        let d2 = self.target[2] - sums[x][2];
        if let (Some(lhs), Some(dd)) = (d2.checked_mul(12 * k), d1.checked_mul(d1)) {
            if let (Some(dd12), Some(kk)) = (dd.checked_mul(12), k.checked_mul(k)) {
                if let Some(k4) = kk.checked_mul(kk - 1) {
                    if dd12.checked_add(k4).map_or(false, |rhs| lhs < rhs) {
                        return false;
                    }
                }
            }
        }
        let mut dprev = k;
        let mut dcur = d1;
        for j in 1..self.r {
            let dnext = self.target[j + 1] - sums[x][j + 1];
            if l.checked_mul(dcur).map_or(false, |lo| dnext < lo) {
                return false;
            }
            if let (Some(cs_l), Some(cs_r)) = (dcur.checked_mul(dcur), dprev.checked_mul(dnext)) {
                if cs_l > cs_r {
                    return false;
                }
            }
            if let (Some(a), Some(b)) = ((l + u).checked_mul(dcur), (l * u).checked_mul(dprev)) {
                if a.checked_sub(b).map_or(false, |hi| dnext > hi) {
                    return false;
                }
            }
            dprev = dcur;
            dcur = dnext;
        }
        true
    }

    fn step(&self, state: &mut State, x: u8) {
        let pos = state.letters.len() + 1;
        state.letters.push(x);
        state.counts[x as usize] += 1;
        if !self.unconstrained {
            for j in 0..=self.r {
                state.sums[x as usize][j] += self.pow[pos][j];
            }
        }
        state.used = state.used.max(x as usize + 1);
    }

    fn letter_limit(&self, state: &State) -> usize {
        if self.canonical {
            (state.used + 1).min(self.b)
        } else {
            self.b
        }
    }

    fn viable(&self, state: &State, x: u8) -> bool {
        if self.unconstrained {
            return true;
        }
        state.counts[x as usize] < self.cap
    }

    fn children(&self, state: &State) -> Vec<State> {
        let mut out = Vec::new();
        for x in 0..self.letter_limit(state) as u8 {
            if !self.viable(state, x) {
                continue;
            }
            let mut child = state.clone();
            self.step(&mut child, x);
            if self.unconstrained
                || self.feasible(child.letters.len(), &child.counts, &child.sums)
            {
                out.push(child);
            }
        }
        out
    }

    fn dfs(&self, state: State, visit: &mut impl FnMut(&[u8]) -> ControlFlow<()>) {
        let mut state = state;
        let _ = self.dfs_inner(&mut state, visit);
    }

    fn dfs_inner(
        &self,
        state: &mut State,
        visit: &mut impl FnMut(&[u8]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if state.letters.len() == self.m {
            // The window prune with an empty suffix pins every sum to its
            // target, so reaching full depth means the word qualifies.
            return visit(&state.letters);
        }
        let saved_used = state.used;
        for x in 0..self.letter_limit(state) as u8 {
            if !self.viable(state, x) {
                continue;
            }
            self.step(state, x);
            if self.unconstrained
                || self.feasible(state.letters.len(), &state.counts, &state.sums)
            {
                self.dfs_inner(state, visit)?;
            }
            // Undo the step.
            let pos = state.letters.len();
            state.letters.pop();
            state.counts[x as usize] -= 1;
            if !self.unconstrained {
                for j in 0..=self.r {
                    state.sums[x as usize][j] -= self.pow[pos][j];
                }
            }
            state.used = saved_used;
        }
        ControlFlow::Continue(())
    }

    /// Viable prefixes at the shallowest depth that spreads the work over
    /// at least 64 tasks per worker (or bottoms out). Prefixes stay in
    /// lexicographic order, which is what makes the parallel merge
    /// deterministic.
    fn prefix_tasks(&self, jobs: usize) -> Vec<State> {
        let want = 64 * jobs;
        let mut frontier = vec![self.root()];
        let mut depth = 0;
        while frontier.len() < want && depth < self.m {
            let mut next = Vec::with_capacity(frontier.len() * self.b);
            for state in &frontier {
                next.extend(self.children(state));
            }
            frontier = next;
            depth += 1;
            if frontier.is_empty() {
                break;
            }
        }
        frontier
    }
}

/// Floor square root by Newton iteration; the seed is a power of two at
/// least sqrt(n), and the sequence decreases monotonically to the floor.
fn isqrt(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let shift = (128 - n.leading_zeros()).div_ceil(2);
    let mut x = 1u128 << shift;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Processes tasks in a fixed order with `jobs` workers and returns the
/// per-task results in task order, independent of scheduling.
fn run_tasks<R: Send>(
    searcher: &Searcher,
    tasks: Vec<State>,
    jobs: usize,
    work: impl Fn(&Searcher, State) -> R + Sync,
) -> Vec<R> {
    let cursor = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let tasks: Vec<Mutex<Option<State>>> = tasks.into_iter().map(|t| Mutex::new(Some(t))).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let state = tasks[i].lock().unwrap().take().expect("task taken once");
                let result = work(searcher, state);
                *slots[i].lock().unwrap() = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every task ran"))
        .collect()
}
