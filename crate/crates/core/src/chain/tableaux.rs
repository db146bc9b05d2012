use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::ChainError;

/// A rectangular filling with distinct entries from `1..=g`, strictly
/// increasing along rows and columns. Entries are row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tableau {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u32>,
}

impl Tableau {
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }
}

fn shape(g: i64, r: i64, d: i64) -> Result<(usize, usize), ChainError> {
    let (rows, cols) = (r + 1, g - d + r);
    if r < 0 || cols < 0 {
        return Err(ChainError::TableauShape { rows, cols });
    }
    Ok((rows as usize, cols as usize))
}

/// Number of `(r+1) x (g-d+r)` tableaux with entries in `1..=g`.
///
/// Entries are placed in increasing order, each either skipped or added at an
/// outer corner of the partially filled shape.
pub fn count_tableaux(g: i64, r: i64, d: i64) -> Result<u128, ChainError> {
    let (rows, cols) = shape(g, r, d)?;
    if rows * cols == 0 {
        return Ok(1);
    }
    let mut layer: BTreeMap<Vec<u16>, u128> = BTreeMap::new();
    layer.insert(alloc::vec![0; rows], 1);
    for _ in 0..g.max(0) {
        let mut next = layer.clone();
        for (lens, &n) in &layer {
            for i in 0..rows {
                let l = lens[i] as usize;
                if l < cols && (i == 0 || (lens[i - 1] as usize) > l) {
                    let mut grown = lens.clone();
                    grown[i] += 1;
                    *next.entry(grown).or_insert(0) += n;
                }
            }
        }
        layer = next;
    }
    Ok(layer.get(&alloc::vec![cols as u16; rows]).copied().unwrap_or(0))
}

/// Calls `f` on every tableau counted by [`count_tableaux`], in lexicographic
/// order of the entry sequence.
pub fn for_each_tableau<F: FnMut(&Tableau)>(g: i64, r: i64, d: i64, mut f: F) -> Result<(), ChainError> {
    let (rows, cols) = shape(g, r, d)?;
    let mut t = Tableau { rows, cols, entries: alloc::vec![0; rows * cols] };
    if rows * cols == 0 {
        f(&t);
        return Ok(());
    }
    fn fill<F: FnMut(&Tableau)>(t: &mut Tableau, cell: usize, g: u32, f: &mut F) {
        if cell == t.entries.len() {
            f(t);
            return;
        }
        let (i, j) = (cell / t.cols, cell % t.cols);
        let left = if j > 0 { t.entries[cell - 1] } else { 0 };
        let up = if i > 0 { t.entries[cell - t.cols] } else { 0 };
        let lo = left.max(up) + 1;
        let remaining_after = (t.rows - i) * (t.cols - j) - 1;
        for v in lo..=g {
            if (g - v) < remaining_after as u32 {
                break;
            }
            if t.entries[..cell].contains(&v) {
                continue;
            }
            t.entries[cell] = v;
            fill(t, cell + 1, g, f);
        }
        t.entries[cell] = 0;
    }
    fill(&mut t, 0, g.max(0) as u32, &mut f);
    Ok(())
}

/// Hook-length count of standard tableaux of a `rows x cols` rectangle.
pub fn hook_length_count(rows: usize, cols: usize) -> u128 {
    let n = rows * cols;
    let mut num: Vec<u128> = (1..=n as u128).collect();
    let mut den: Vec<u128> = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            den.push(((rows - i) + (cols - j) - 1) as u128);
        }
    }
    // cancel by gcd so the product never overflows for desk-sized shapes
    for d in den.iter_mut() {
        for x in num.iter_mut() {
            let c = gcd(*x, *d);
            *x /= c;
            *d /= c;
            if *d == 1 {
                break;
            }
        }
        debug_assert_eq!(*d, 1);
    }
    num.into_iter().product()
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
