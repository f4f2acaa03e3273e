//! Marked length spectra of representation pairs: enumeration of conjugacy
//! classes by cyclically reduced words, counting functions and entropy slopes,
//! and the derivative tests for length functions along deformation paths.

use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::{self, Sl2};
use crate::rep::{
    evaluate_word, pure_bending_path, GhPair, Letter, SurfaceRepresentation, TangentDirection,
    Word,
};

/// Dedupe quantum for trace keys.
pub const TRACE_QUANTUM: f64 = 1e-8;
pub const MAX_WORD_LEN: usize = 12;

/// One conjugacy class: canonical cyclic word, factor traces and lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub word: Word,
    pub tr_l: f64,
    pub tr_r: f64,
    pub len_l: f64,
    pub len_r: f64,
    pub len: f64,
}

/// Deduplicated, sorted length spectrum.
#[derive(Debug, Clone)]
pub struct LengthSpectrum {
    pub entries: Vec<SpectrumEntry>,
    pub max_word_len: usize,
    pub quantum: f64,
}

fn letter_code(l: Letter) -> u32 {
    debug_assert!(l != 0);
    let base = (l.unsigned_abs() - 1) * 2;
    if l > 0 {
        base
    } else {
        base + 1
    }
}

/// Lexicographically minimal rotation of a cyclic word (letters ordered by
/// `letter_code`: g0 < g0^{-1} < g1 < ...).
pub fn canonical_rotation(word: &[Letter]) -> Word {
    let n = word.len();
    if n <= 1 {
        return word.to_vec();
    }
    let mut best: Option<Vec<Letter>> = None;
    for s in 0..n {
        let rot: Vec<Letter> = (0..n).map(|i| word[(s + i) % n]).collect();
        let better = match &best {
            None => true,
            Some(b) => rot
                .iter()
                .map(|&l| letter_code(l))
                .lt(b.iter().map(|&l| letter_code(l))),
        };
        if better {
            best = Some(rot);
        }
    }
    best.unwrap()
}

pub fn is_cyclically_reduced(word: &[Letter]) -> bool {
    let n = word.len();
    if n == 0 {
        return false;
    }
    (0..n).all(|i| word[i] != -word[(i + 1) % n])
}

#[derive(Clone)]
struct EvalTable {
    mats: Vec<nalgebra::Matrix2<f64>>,
}

impl EvalTable {
    fn new(rep: &SurfaceRepresentation) -> Self {
        let mut mats = Vec::with_capacity(rep.generators().len() * 2);
        for g in rep.generators() {
            mats.push(*g.matrix());
            mats.push(*g.inverse().matrix());
        }
        Self { mats }
    }

    fn trace(&self, word: &[Letter]) -> f64 {
        let mut m = self.mats[letter_code(word[0]) as usize];
        for &l in &word[1..] {
            m *= self.mats[letter_code(l) as usize];
        }
        m.trace()
    }
}

fn key_of(tr_l: f64, tr_r: f64, word_len: usize, q: f64) -> (i64, i64, usize) {
    (
        (tr_l / q).round() as i64,
        (tr_r / q).round() as i64,
        word_len,
    )
}

/// Enumerate all conjugacy classes represented by cyclically reduced words of
/// length <= `max_word_len`, canonicalized by minimal rotation and
/// deduplicated by quantized trace pairs plus word length. Entries with a
/// non-hyperbolic factor are excluded. The output is deterministic and
/// independent of the number of worker threads.
pub fn enumerate_classes(pair: &GhPair, max_word_len: usize) -> Result<LengthSpectrum> {
    if max_word_len > MAX_WORD_LEN {
        return Err(Error::InvalidInput(format!(
            "max_word_len {max_word_len} exceeds {MAX_WORD_LEN}"
        )));
    }
    let gens = pair.left.presentation.generator_count() as Letter;
    let letters: Vec<Letter> = (1..=gens).flat_map(|k| [k, -k]).collect();
    let left = EvalTable::new(&pair.left);
    let right = EvalTable::new(&pair.right);

    // shard on (word length, first letter) for parallel enumeration
    let jobs: Vec<(usize, Letter)> = (1..=max_word_len)
        .flat_map(|n| letters.iter().map(move |&l| (n, l)))
        .collect();

    let mut entries: Vec<(i64, i64, usize, SpectrumEntry)> = jobs
        .par_iter()
        .map(|&(n, first)| {
            let mut out = Vec::new();
            let mut word = vec![first];
            dfs_words(&letters, n, &mut word, &mut |w| {
                if let Some(e) = build_entry(&left, &right, w) {
                    let k = key_of(e.tr_l, e.tr_r, w.len(), TRACE_QUANTUM);
                    out.push((k.0, k.1, k.2, e));
                }
            });
            out
        })
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });

    // dedupe: sort by key then canonical word, keep the first per key
    entries.sort_unstable_by(|a, b| {
        (a.0, a.1, a.2)
            .cmp(&(b.0, b.1, b.2))
            .then_with(|| word_cmp(&a.3.word, &b.3.word))
    });
    entries.dedup_by(|a, b| (a.0, a.1, a.2) == (b.0, b.1, b.2));

    let mut entries: Vec<SpectrumEntry> = entries.into_iter().map(|(_, _, _, e)| e).collect();
    entries.sort_unstable_by(|a, b| {
        a.len
            .total_cmp(&b.len)
            .then(a.tr_l.total_cmp(&b.tr_l))
            .then(a.tr_r.total_cmp(&b.tr_r))
            .then(a.word.len().cmp(&b.word.len()))
            .then_with(|| word_cmp(&a.word, &b.word))
    });

    Ok(LengthSpectrum {
        entries,
        max_word_len,
        quantum: TRACE_QUANTUM,
    })
}

fn word_cmp(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    a.iter()
        .map(|&l| letter_code(l))
        .cmp(b.iter().map(|&l| letter_code(l)))
}

/// DFS over reduced words of exact length `n` extending `word`; visits only
/// canonical minimal rotations (cyclically reduced, starting at their
/// minimal letter).
fn dfs_words(letters: &[Letter], n: usize, word: &mut Word, visit: &mut impl FnMut(&Word)) {
    if word.len() == n {
        if is_cyclically_reduced(word) && canonical_rotation(word) == *word {
            visit(word);
        }
        return;
    }
    let first_code = letter_code(word[0]);
    let last = *word.last().unwrap();
    for &l in letters {
        // letters below the first cannot appear in a minimal rotation
        if letter_code(l) < first_code || l == -last {
            continue;
        }
        word.push(l);
        dfs_words(letters, n, word, visit);
        word.pop();
    }
}

fn build_entry(left: &EvalTable, right: &EvalTable, word: &Word) -> Option<SpectrumEntry> {
    let tr_l = left.trace(word);
    let tr_r = right.trace(word);
    if tr_l.abs() <= 2.0 + 1e-12 || tr_r.abs() <= 2.0 + 1e-12 {
        return None;
    }
    let len_l = 2.0 * (tr_l.abs() / 2.0).acosh();
    let len_r = 2.0 * (tr_r.abs() / 2.0).acosh();
    Some(SpectrumEntry {
        word: word.clone(),
        tr_l,
        tr_r,
        len_l,
        len_r,
        len: lie::ads_length(len_l, len_r),
    })
}

impl LengthSpectrum {
    /// Number of classes with length <= t.
    pub fn counting_function(&self, t: f64) -> usize {
        self.entries.partition_point(|e| e.len <= t)
    }

    /// Minimal generator length (over word-length-1 entries).
    pub fn min_generator_length(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter(|e| e.word.len() == 1)
            .map(|e| e.len)
            .min_by(f64::total_cmp)
    }

    /// Upper bound for entropy windows: T_hi <= c_min * max_word_len, where
    /// c_min is the smallest generator length. Beyond this cap the word-length
    /// cutoff certainly truncates the count.
    pub fn window_cap(&self) -> Option<f64> {
        self.min_generator_length()
            .map(|c| c * self.max_word_len as f64)
    }

    /// Default fitting window [0.25 cap, 0.5 cap]. The word-length cutoff
    /// starves the count well below the cap, so the fit stays in the lower
    /// half; the lower end keeps enough classes for a stable slope.
    pub fn default_window(&self) -> Result<(f64, f64)> {
        let cap = self.window_cap().ok_or_else(|| {
            Error::InsufficientData("no word-length-1 entries to size the window".into())
        })?;
        Ok((0.25 * cap, 0.5 * cap))
    }

    pub fn from_entries(entries: Vec<SpectrumEntry>, max_word_len: usize) -> Self {
        let mut entries = entries;
        entries.sort_unstable_by(|a, b| a.len.total_cmp(&b.len));
        Self {
            entries,
            max_word_len,
            quantum: TRACE_QUANTUM,
        }
    }
}

/// Least-squares entropy estimate from the counting function.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    pub window: (f64, f64),
    pub slope_stderr: f64,
    pub sample_count: usize,
}

/// Fit log N(T) against T on an evenly spaced grid inside the window.
///
/// Caveat: the enumeration cuts off at a word length, so long geodesics are
/// missing; the window must respect `window_cap`.
pub fn entropy_estimate(spec: &LengthSpectrum, window: (f64, f64)) -> Result<EntropyEstimate> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi || lo < 0.0 {
        return Err(Error::InsufficientData(format!("bad window [{lo}, {hi}]")));
    }
    let samples = 12usize;
    let mut ts = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let n = spec.counting_function(t);
        if n > 0 {
            ts.push(t);
            ys.push((n as f64).ln());
        }
    }
    if ts.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "only {} usable samples in window [{lo}, {hi}]",
            ts.len()
        )));
    }
    let n = ts.len() as f64;
    let tbar = ts.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = ts.iter().map(|t| (t - tbar) * (t - tbar)).sum();
    let sxy: f64 = ts
        .iter()
        .zip(&ys)
        .map(|(t, y)| (t - tbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let ss_res: f64 = ts
        .iter()
        .zip(&ys)
        .map(|(t, y)| {
            let fit = ybar + slope * (t - tbar);
            (y - fit) * (y - fit)
        })
        .sum();
    let stderr = (ss_res / (n - 2.0) / sxx).sqrt();
    Ok(EntropyEstimate {
        value: slope,
        window,
        slope_stderr: stderr,
        sample_count: ts.len(),
    })
}

/// Central-difference derivatives of the lengths of the given classes along a
/// path of pairs, with a Richardson combination of steps eps and eps/2.
/// Returns (derivatives, base lengths).
pub fn length_derivatives<F>(path: F, eps: f64, words: &[Word]) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: Fn(f64) -> Result<GhPair>,
{
    let base = path(0.0)?;
    let lens: Vec<f64> = words
        .iter()
        .map(|w| pair_length(&base, w))
        .collect::<Result<Vec<_>>>()?;
    let diff_at = |e: f64| -> Result<Vec<f64>> {
        let plus = path(e)?;
        let minus = path(-e)?;
        words
            .iter()
            .map(|w| Ok((pair_length(&plus, w)? - pair_length(&minus, w)?) / (2.0 * e)))
            .collect()
    };
    let d1 = diff_at(eps)?;
    let d2 = diff_at(eps / 2.0)?;
    let richardson: Vec<f64> = d1
        .iter()
        .zip(&d2)
        .map(|(a, b)| (4.0 * b - a) / 3.0)
        .collect();
    Ok((richardson, lens))
}

fn pair_length(pair: &GhPair, word: &[Letter]) -> Result<f64> {
    let l = lie::translation_length(&evaluate_word(&pair.left, word))?;
    let r = lie::translation_length(&evaluate_word(&pair.right, word))?;
    Ok(lie::ads_length(l, r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BendingReport {
    pub max_rel_derivative: f64,
    pub class_count: usize,
}

/// Maximal relative first derivative |dl/dt| / l of class lengths along the
/// pure bending path through `rep` in direction `dir`, at t = 0.
pub fn bending_derivative_test(
    rep: &SurfaceRepresentation,
    dir: &TangentDirection,
    eps: f64,
    max_word_len: usize,
) -> Result<BendingReport> {
    if !(1e-5..=1e-2).contains(&eps) {
        return Err(Error::InvalidInput(format!("eps {eps} out of [1e-5, 1e-2]")));
    }
    let base = GhPair::fuchsian(rep.clone());
    let spec = enumerate_classes(&base, max_word_len)?;
    let words: Vec<Word> = spec.entries.iter().map(|e| e.word.clone()).collect();
    let (derivs, lens) = length_derivatives(|t| pure_bending_path(rep, dir, t), eps, &words)?;
    let max_rel = derivs
        .iter()
        .zip(&lens)
        .map(|(d, l)| (d / l).abs())
        .fold(0.0, f64::max);
    Ok(BendingReport {
        max_rel_derivative: max_rel,
        class_count: words.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProportionalityReport {
    pub k_fit: f64,
    pub rel_residual: f64,
    pub class_count: usize,
}

/// Least-squares fit of dl(w)/dt = k l(w) over all enumerated classes of the
/// base pair of the path; `rel_residual` is ||d - k l|| / ||l||.
pub fn proportionality_test<F>(
    path: F,
    eps: f64,
    max_word_len: usize,
) -> Result<ProportionalityReport>
where
    F: Fn(f64) -> Result<GhPair>,
{
    if !(1e-5..=1e-2).contains(&eps) {
        return Err(Error::InvalidInput(format!("eps {eps} out of [1e-5, 1e-2]")));
    }
    let base = path(0.0)?;
    let spec = enumerate_classes(&base, max_word_len)?;
    let words: Vec<Word> = spec.entries.iter().map(|e| e.word.clone()).collect();
    let (derivs, lens) = length_derivatives(path, eps, &words)?;
    let ll: f64 = lens.iter().map(|l| l * l).sum();
    let dl: f64 = derivs.iter().zip(&lens).map(|(d, l)| d * l).sum();
    let k = if ll > 0.0 { dl / ll } else { 0.0 };
    let res: f64 = derivs
        .iter()
        .zip(&lens)
        .map(|(d, l)| (d - k * l) * (d - k * l))
        .sum::<f64>()
        .sqrt();
    Ok(ProportionalityReport {
        k_fit: k,
        rel_residual: if ll > 0.0 { res / ll.sqrt() } else { 0.0 },
        class_count: words.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionRow {
    pub n: u32,
    pub log_mu: f64,
    pub expansion: f64,
    pub remainder: f64,
    /// remainder scaled by lambda^{4n}
    pub normalized: f64,
}

/// Remainders of log mu_n against n log lambda + log a + lambda^{-2n}(ad-1)/a^2,
/// where mu_n is the top eigenvalue of A^n B by the quadratic formula.
/// Requires A = diag(lambda, 1/lambda) with lambda > 1 and B hyperbolic with
/// a > 0 and b c != 0 (distinct axes).
pub fn eigen_expansion_check(
    a: &Sl2,
    b: &Sl2,
    n_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<ExpansionRow>> {
    let am = a.matrix();
    if am[(0, 1)].abs() > 1e-12 || am[(1, 0)].abs() > 1e-12 {
        return Err(Error::DegenerateConfiguration("A must be diagonal".into()));
    }
    let lambda = am[(0, 0)];
    if lambda <= 1.0 {
        return Err(Error::DegenerateConfiguration(
            "A must have lambda > 1".into(),
        ));
    }
    let bm = b.matrix();
    let (ba, bb, bc, bd) = (bm[(0, 0)], bm[(0, 1)], bm[(1, 0)], bm[(1, 1)]);
    if !b.is_hyperbolic() {
        return Err(Error::NotHyperbolic {
            trace_abs: b.trace().abs(),
        });
    }
    if bb * bc == 0.0 {
        return Err(Error::DegenerateConfiguration(
            "B shares an axis with A (b c = 0)".into(),
        ));
    }
    if ba <= 0.0 {
        return Err(Error::DegenerateConfiguration(
            "expansion needs a > 0".into(),
        ));
    }
    let mut rows = Vec::new();
    for n in n_range {
        let ln = lambda.powi(n as i32);
        let t = ln * ba + bd / ln;
        if t <= 2.0 {
            return Err(Error::DegenerateConfiguration(format!(
                "A^{n} B is not hyperbolic (tr = {t})"
            )));
        }
        let mu = (t + (t * t - 4.0).sqrt()) / 2.0;
        let log_mu = mu.ln();
        let expansion = n as f64 * lambda.ln() + ba.ln() + (ba * bd - 1.0) / (ba * ba) / (ln * ln);
        let remainder = log_mu - expansion;
        rows.push(ExpansionRow {
            n,
            log_mu,
            expansion,
            remainder,
            normalized: remainder * lambda.powi(4 * n as i32),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

/// Compare the trace of the image of a word in SO_0(2,2) against the length
/// diagonalization e^{(lL+lR)/2} + e^{(lL-lR)/2} + e^{(lR-lL)/2} + e^{-(lL+lR)/2}.
pub fn trace_so22_check(pair: &GhPair, word: &[Letter]) -> Result<TraceCheck> {
    let wl = evaluate_word(&pair.left, word);
    let wr = evaluate_word(&pair.right, word);
    trace_so22_check_matrices(&wl, &wr)
}

pub fn trace_so22_check_matrices(wl: &Sl2, wr: &Sl2) -> Result<TraceCheck> {
    let ll = lie::translation_length(wl)?;
    let lr = lie::translation_length(wr)?;
    let lhs = lie::rho_so22(wl, wr)?.trace();
    let rhs = ((ll + lr) / 2.0).exp()
        + ((ll - lr) / 2.0).exp()
        + ((lr - ll) / 2.0).exp()
        + (-(ll + lr) / 2.0).exp();
    Ok(TraceCheck {
        lhs,
        rhs,
        rel_error: (lhs - rhs).abs() / rhs,
    })
}

fn format_value(x: f64) -> String {
    format!("{:.11e}", x)
}

fn format_word(word: &[Letter], names: &[String]) -> String {
    word.iter()
        .map(|&l| {
            let name = &names[(l.unsigned_abs() - 1) as usize];
            if l > 0 {
                name.clone()
            } else {
                format!("-{name}")
            }
        })
        .collect::<Vec<_>>()
        .join(".")
}

/// Render the spectrum as CSV with 12 significant digits per value.
pub fn spectrum_to_csv(spec: &LengthSpectrum, names: &[String]) -> String {
    let mut out = String::from("word,tr_L,tr_R,len_L,len_R,len\n");
    for e in &spec.entries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_word(&e.word, names),
            format_value(e.tr_l),
            format_value(e.tr_r),
            format_value(e.len_l),
            format_value(e.len_r),
            format_value(e.len),
        ));
    }
    out
}

pub fn write_spectrum_csv(spec: &LengthSpectrum, names: &[String], path: &Path) -> Result<()> {
    std::fs::write(path, spectrum_to_csv(spec, names))?;
    Ok(())
}

/// Read a spectrum CSV back; generator names are mapped to indices in order
/// of first appearance.
pub fn read_spectrum_csv(path: &Path) -> Result<LengthSpectrum> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty spectrum file".into()))?;
    if header.trim() != "word,tr_L,tr_R,len_L,len_R,len" {
        return Err(Error::Format(format!("unexpected header {header:?}")));
    }
    let mut names: Vec<String> = Vec::new();
    let mut entries = Vec::new();
    let mut max_len = 0usize;
    for (li, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(Error::Format(format!("line {}: want 6 columns", li + 2)));
        }
        let mut word = Vec::new();
        for tok in cols[0].split('.') {
            let (sign, name) = if let Some(rest) = tok.strip_prefix('-') {
                (-1i32, rest)
            } else {
                (1i32, tok)
            };
            let idx = match names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    names.push(name.to_string());
                    names.len() - 1
                }
            };
            word.push(sign * (idx as i32 + 1));
        }
        max_len = max_len.max(word.len());
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::Format(format!("line {}: {e}", li + 2)))
        };
        entries.push(SpectrumEntry {
            word,
            tr_l: num(cols[1])?,
            tr_r: num(cols[2])?,
            len_l: num(cols[3])?,
            len_r: num(cols[4])?,
            len: num(cols[5])?,
        });
    }
    Ok(LengthSpectrum::from_entries(entries, max_len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{deform, octagon_fuchsian, random_direction};
    use proptest::prelude::*;

    fn fuchsian_pair() -> GhPair {
        GhPair::fuchsian(octagon_fuchsian().unwrap())
    }

    #[test]
    fn word_length_one_gives_the_generators() {
        let pair = fuchsian_pair();
        let spec = enumerate_classes(&pair, 1).unwrap();
        // all octagon generators share one trace, so the 8 letters may merge;
        // every entry is a hyperbolic generator of the expected length
        assert!(!spec.entries.is_empty());
        let expect = 2.0 * (1.0 + 2.0f64.sqrt()).acosh();
        for e in &spec.entries {
            assert_eq!(e.word.len(), 1);
            assert!(e.tr_l.abs() > 2.0);
            assert!((e.len - e.len_l).abs() < 1e-12);
            assert!((e.len - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn rotations_collapse_and_counts_are_monotone() {
        let pair = fuchsian_pair();
        let spec2 = enumerate_classes(&pair, 2).unwrap();
        for e in &spec2.entries {
            assert_eq!(canonical_rotation(&e.word), e.word);
        }
        let mut prev = 0;
        for n in 1..=4 {
            let spec = enumerate_classes(&pair, n).unwrap();
            assert!(spec.entries.len() >= prev, "counts monotone in cutoff");
            prev = spec.entries.len();
        }
    }

    #[test]
    fn entries_sorted_and_len_consistent() {
        let pair = fuchsian_pair();
        let spec = enumerate_classes(&pair, 4).unwrap();
        for w in spec.entries.windows(2) {
            assert!(
                w[0].len < w[1].len
                    || (w[0].len == w[1].len && (w[0].tr_l, w[0].tr_r) <= (w[1].tr_l, w[1].tr_r))
            );
        }
        for e in &spec.entries {
            assert!((e.len - (e.len_l + e.len_r) / 2.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn counting_function_basics() {
        let pair = fuchsian_pair();
        let spec = enumerate_classes(&pair, 3).unwrap();
        assert_eq!(spec.counting_function(0.0), 0);
        assert_eq!(spec.counting_function(f64::INFINITY), spec.entries.len());
        let mut last = 0;
        for t in [1.0, 3.0, 5.0, 8.0, 12.0] {
            let n = spec.counting_function(t);
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn inverse_classes_share_length_data() {
        let pair = fuchsian_pair();
        let spec = enumerate_classes(&pair, 3).unwrap();
        let left = EvalTable::new(&pair.left);
        let right = EvalTable::new(&pair.right);
        for e in spec.entries.iter().take(40) {
            let inv = crate::rep::invert_word(&e.word);
            let k = key_of(left.trace(&inv), right.trace(&inv), inv.len(), TRACE_QUANTUM);
            let found = spec
                .entries
                .iter()
                .any(|o| key_of(o.tr_l, o.tr_r, o.word.len(), TRACE_QUANTUM) == k);
            assert!(found, "inverse class missing for {:?}", e.word);
        }
    }

    #[test]
    fn conjugated_representation_gives_same_length_multiset() {
        let rep = octagon_fuchsian().unwrap();
        let g = crate::lie::Sl2::from_entries(1.2, 0.3, 0.1, (1.0 + 0.3 * 0.1) / 1.2).unwrap();
        let conj = rep.conjugated(&g).unwrap();
        let a = enumerate_classes(&GhPair::fuchsian(rep), 3).unwrap();
        let b = enumerate_classes(&GhPair::fuchsian(conj), 3).unwrap();
        assert_eq!(a.entries.len(), b.entries.len());
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert!((x.len - y.len).abs() <= 1e-9 * (1.0 + x.len));
        }
    }

    #[test]
    fn determinism_across_thread_counts() {
        let pair = fuchsian_pair();
        let names = pair.left.presentation.generator_names.clone();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| spectrum_to_csv(&enumerate_classes(&pair, 4).unwrap(), &names))
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a, b);
    }

    #[test]
    fn entropy_on_synthetic_exponential_counts() {
        // N(T) = floor(e^{0.5 T}) realized by classes at len 2 ln k
        let entries: Vec<SpectrumEntry> = (1..30000)
            .map(|k| {
                let len = 2.0 * (k as f64).ln();
                SpectrumEntry {
                    word: vec![1],
                    tr_l: 0.0,
                    tr_r: 0.0,
                    len_l: len,
                    len_r: len,
                    len,
                }
            })
            .collect();
        let spec = LengthSpectrum::from_entries(entries, 1);
        let est = entropy_estimate(&spec, (10.0, 19.0)).unwrap();
        assert!(
            (est.value - 0.5).abs() <= 0.02,
            "synthetic slope {}",
            est.value
        );
        assert!(est.sample_count >= 10);
    }

    #[test]
    fn entropy_insufficient_data() {
        let spec = LengthSpectrum::from_entries(vec![], 0);
        assert!(matches!(
            entropy_estimate(&spec, (1.0, 2.0)),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn bending_derivative_vanishes_and_same_sign_path_does_not() {
        let rep = octagon_fuchsian().unwrap();
        let dir = random_direction(&rep, 42);
        let report = bending_derivative_test(&rep, &dir, 1e-3, 2).unwrap();
        assert!(report.max_rel_derivative <= 1e-9, "{report:?}");

        // doubling eps changes nothing (evenness is exact)
        let report2 = bending_derivative_test(&rep, &dir, 2e-3, 2).unwrap();
        assert!((report.max_rel_derivative - report2.max_rel_derivative).abs() <= 1e-9);

        // the same-sign path moves lengths at first order
        let spec = enumerate_classes(&GhPair::fuchsian(rep.clone()), 2).unwrap();
        let words: Vec<Word> = spec.entries.iter().map(|e| e.word.clone()).collect();
        let (derivs, lens) = length_derivatives(
            |t| {
                let moved = deform(&rep, &dir, t)?;
                GhPair::new(moved.clone(), moved)
            },
            1e-3,
            &words,
        )
        .unwrap();
        let max_rel = derivs
            .iter()
            .zip(&lens)
            .map(|(d, l)| (d / l).abs())
            .fold(0.0, f64::max);
        assert!(max_rel > 1e-3, "same-sign path derivative {max_rel}");
    }

    #[test]
    fn proportionality_fuchsian_bending_is_null() {
        let rep = octagon_fuchsian().unwrap();
        let dir = random_direction(&rep, 43);
        let report = proportionality_test(|t| pure_bending_path(&rep, &dir, t), 1e-3, 2).unwrap();
        assert!(report.k_fit.abs() <= 1e-8, "{report:?}");
        assert!(report.rel_residual <= 1e-8, "{report:?}");

        // a frozen path has identically zero derivatives
        let pair = GhPair::fuchsian(rep.clone());
        let frozen = proportionality_test(|_| Ok(pair.clone()), 1e-3, 2).unwrap();
        assert_eq!(frozen.k_fit, 0.0);
        assert_eq!(frozen.rel_residual, 0.0);
    }

    #[test]
    fn eigen_expansion_worked_example() {
        let a = Sl2::from_entries(2.0, 0.0, 0.0, 0.5).unwrap();
        let b = Sl2::from_entries(2.0, 1.0, 1.0, 1.0).unwrap();
        let rows = eigen_expansion_check(&a, &b, 2..=10).unwrap();
        let r3 = rows.iter().find(|r| r.n == 3).unwrap();
        // frozen from the quadratic-formula oracle with t = 2^{n+1} + 2^{-n}
        assert!((r3.log_mu - 2.7765025654).abs() < 1e-9, "{}", r3.log_mu);
        assert!((r3.expansion - 2.7764949740).abs() < 1e-9, "{}", r3.expansion);
        assert!(r3.remainder.abs() <= 1e-4);

        // the normalized remainders stay bounded over n
        let base = rows[0].normalized.abs();
        for r in &rows {
            assert!(
                r.normalized.abs() <= 10.0 * base.max(1e-6),
                "n = {}: {} vs {}",
                r.n,
                r.normalized,
                base
            );
        }
    }

    #[test]
    fn eigen_expansion_guards() {
        let a = Sl2::from_entries(2.0, 0.0, 0.0, 0.5).unwrap();
        let diag_b = Sl2::from_entries(3.0, 0.0, 0.0, 1.0 / 3.0).unwrap();
        assert!(matches!(
            eigen_expansion_check(&a, &diag_b, 2..=4),
            Err(Error::DegenerateConfiguration(_))
        ));
        let not_diag_a = Sl2::from_entries(2.0, 1.0, 0.0, 0.5).unwrap();
        let b = Sl2::from_entries(2.0, 1.0, 1.0, 1.0).unwrap();
        assert!(eigen_expansion_check(&not_diag_a, &b, 2..=4).is_err());
    }

    #[test]
    fn trace_check_closed_form() {
        // lL = lR = 2 gives rhs = 4 cosh^2(1) = e^2 + 2 + e^{-2}
        let l = std::f64::consts::E;
        let a = Sl2::from_entries(l, 0.0, 0.0, 1.0 / l).unwrap();
        let tc = trace_so22_check_matrices(&a, &a).unwrap();
        let expect = 4.0 * 1.0f64.cosh().powi(2);
        assert!((tc.rhs - expect).abs() < 1e-12);
        assert!(tc.rel_error <= 1e-12);

        let parabolic = Sl2::from_entries(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            trace_so22_check_matrices(&a, &parabolic),
            Err(Error::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn trace_check_on_words() {
        let pair = fuchsian_pair();
        for w in [vec![1], vec![1, 2], vec![1, -2, 3], vec![1, 2, 3, 4]] {
            let tc = trace_so22_check(&pair, &w).unwrap();
            assert!(tc.rel_error <= 1e-8, "word {w:?}: {tc:?}");
        }
    }

    #[test]
    fn csv_roundtrip() {
        let pair = fuchsian_pair();
        let names = pair.left.presentation.generator_names.clone();
        let spec = enumerate_classes(&pair, 2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.csv");
        write_spectrum_csv(&spec, &names, &path).unwrap();
        let back = read_spectrum_csv(&path).unwrap();
        assert_eq!(back.entries.len(), spec.entries.len());
        for (a, b) in spec.entries.iter().zip(&back.entries) {
            assert!((a.len - b.len).abs() <= 1e-10 * (1.0 + a.len));
            assert_eq!(a.word.len(), b.word.len());
        }
    }

    proptest! {
        #[test]
        fn canonical_rotation_is_rotation_invariant(
            word in proptest::collection::vec(
                (1i32..=4, proptest::bool::ANY).prop_map(|(k, s)| if s { k } else { -k }),
                1..8,
            ),
            shift in 0usize..8,
        ) {
            let canon = canonical_rotation(&word);
            let n = word.len();
            let rotated: Vec<_> = (0..n).map(|i| word[(i + shift % n) % n]).collect();
            prop_assert_eq!(canonical_rotation(&rotated), canon);
        }

        #[test]
        fn canonical_rotation_is_minimal(
            word in proptest::collection::vec(
                (1i32..=4, proptest::bool::ANY).prop_map(|(k, s)| if s { k } else { -k }),
                1..8,
            ),
        ) {
            let canon = canonical_rotation(&word);
            let n = word.len();
            for s in 0..n {
                let rot: Vec<_> = (0..n).map(|i| word[(s + i) % n]).collect();
                prop_assert!(word_cmp(&canon, &rot) != std::cmp::Ordering::Greater);
            }
        }
    }
}
