use crate::{Error, Result};

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!("rankings of different lengths {} and {}", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("need at least two items".into()));
    }
    Ok(())
}

/// 1-based ranks in ascending order of value; ties share their mean rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::Undefined("correlation of a constant ranking".into()));
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Counts inversions of `v` while merge-sorting it.
fn merge_count(v: &mut [f64], buf: &mut Vec<f64>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid], buf) + merge_count(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf.push(v[j]);
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf.push(v[i]);
            i += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    swaps
}

/// Number of tied pairs within runs of equal values of a sorted sequence.
fn tied_pairs<T: PartialEq>(sorted: impl Iterator<Item = T>) -> u64 {
    let mut total = 0u64;
    let mut run = 0u64;
    let mut prev: Option<T> = None;
    for x in sorted {
        if prev.as_ref() == Some(&x) {
            run += 1;
        } else {
            total += run * run.saturating_sub(1) / 2;
            run = 1;
        }
        prev = Some(x);
    }
    total + run * run.saturating_sub(1) / 2
}

/// Kendall's tau-b in `O(n log n)` (Knight's algorithm).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len() as u64;
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(y[a].total_cmp(&y[b])));
    let n0 = n * (n - 1) / 2;
    let n1 = tied_pairs(idx.iter().map(|&i| x[i]));
    let n3 = tied_pairs(idx.iter().map(|&i| (x[i], y[i])));
    let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let mut buf = Vec::with_capacity(ys.len());
    let swaps = merge_count(&mut ys, &mut buf);
    let n2 = tied_pairs(ys.iter().copied());
    let denom = ((n0 - n1) as f64 * (n0 - n2) as f64).sqrt();
    if denom == 0.0 {
        return Err(Error::Undefined("tau-b of a constant ranking".into()));
    }
    let num = n0 as f64 - n1 as f64 - n2 as f64 + n3 as f64 - 2.0 * swaps as f64;
    Ok((num / denom).clamp(-1.0, 1.0))
}

/// Item indices by descending score; ties go to the smaller index.
pub fn descending_order(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

/// nDCG of the ordering induced by `sample` against relevance taken from
/// the ordering induced by `observed`: the item at observed rank `r`
/// (1-based) has gain `n − r`, and position `p` is discounted by
/// `1 / log2(p + 1)`.
pub fn ndcg(observed: &[f64], sample: &[f64]) -> Result<f64> {
    if observed.len() != sample.len() {
        return Err(Error::InvalidArgument("score vectors of different lengths".into()));
    }
    let n = observed.len();
    if n == 0 {
        return Err(Error::InvalidArgument("nDCG of an empty ranking".into()));
    }
    let mut gain = vec![0.0; n];
    for (r, &v) in descending_order(observed).iter().enumerate() {
        gain[v] = (n - (r + 1)) as f64;
    }
    let dcg =
        |order: &[usize]| -> f64 { order.iter().enumerate().map(|(p, &v)| gain[v] / ((p + 2) as f64).log2()).sum() };
    let ideal = dcg(&descending_order(observed));
    if ideal == 0.0 {
        return Ok(1.0);
    }
    Ok(dcg(&descending_order(sample)) / ideal)
}
