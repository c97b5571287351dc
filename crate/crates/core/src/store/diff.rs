use serde::Serialize;

/// One differing line. `left`/`right` hold the text on each side; a line
/// present on one side only has `None` on the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub left_line: Option<usize>,
    pub right_line: Option<usize>,
    pub left: Option<String>,
    pub right: Option<String>,
}

impl DiffEntry {
    /// Position used for reporting: the left line when present.
    pub fn line(&self) -> usize {
        self.left_line
            .or(self.right_line)
            .expect("entry has a side")
    }

    pub fn mirrored(&self) -> Self {
        Self {
            left_line: self.right_line,
            right_line: self.left_line,
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

/// Minimal line diff via longest common subsequence. A run of removals
/// followed by additions is paired up so an edited line shows as a single
/// entry holding both texts.
///
/// `diff_lines(b, a)` is exactly the mirror of `diff_lines(a, b)`: the LCS
/// is always computed in one canonical orientation.
pub fn diff_lines(a: &[&str], b: &[&str]) -> Vec<DiffEntry> {
    if (a.len(), a) > (b.len(), b) {
        return diff_lines(b, a).iter().map(DiffEntry::mirrored).collect();
    }
    let (n, m) = (a.len(), b.len());
    // lcs[i][j] = LCS length of a[i..] and b[j..]
    let mut lcs = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            lcs[i][j] = if a[i] == b[j] {
                lcs[i + 1][j + 1] + 1
            } else {
                lcs[i + 1][j].max(lcs[i][j + 1])
            };
        }
    }

    let mut out = Vec::new();
    let (mut del, mut ins): (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
    let flush = |del: &mut Vec<usize>, ins: &mut Vec<usize>, out: &mut Vec<DiffEntry>| {
        for k in 0..del.len().max(ins.len()) {
            let (l, r) = (del.get(k).copied(), ins.get(k).copied());
            out.push(DiffEntry {
                left_line: l.map(|i| i + 1),
                right_line: r.map(|j| j + 1),
                left: l.map(|i| a[i].to_owned()),
                right: r.map(|j| b[j].to_owned()),
            });
        }
        del.clear();
        ins.clear();
    };
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        if i < n && j < m && a[i] == b[j] {
            flush(&mut del, &mut ins, &mut out);
            i += 1;
            j += 1;
        } else if j == m || (i < n && lcs[i + 1][j] >= lcs[i][j + 1]) {
            del.push(i);
            i += 1;
        } else {
            ins.push(j);
            j += 1;
        }
    }
    flush(&mut del, &mut ins, &mut out);
    out
}
