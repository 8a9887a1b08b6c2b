use std::collections::BTreeMap;

/// A multiset of discrete tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bag<T: Ord> {
    counts: BTreeMap<T, u32>,
}

impl<T: Ord> Default for Bag<T> {
    fn default() -> Self {
        Bag {
            counts: BTreeMap::new(),
        }
    }
}

impl<T: Ord> Bag<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, token: T) {
        *self.counts.entry(token).or_insert(0) += 1;
    }

    pub fn count(&self, token: &T) -> u32 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    /// Total multiplicity.
    pub fn len(&self) -> usize {
        self.counts.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, u32)> {
        self.counts.iter().map(|(t, &c)| (t, c))
    }
}

impl<T: Ord> FromIterator<T> for Bag<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut bag = Bag::new();
        for t in iter {
            bag.insert(t);
        }
        bag
    }
}

/// `|A △ B| / |A ∪ B|` with multiset semantics: the union takes the larger
/// multiplicity of each token, the symmetric difference the absolute
/// difference. Two empty bags are at distance 0.
pub fn bag_distance<T: Ord>(a: &Bag<T>, b: &Bag<T>) -> f64 {
    let mut sym = 0u64;
    let mut union = 0u64;
    let mut tally = |x: u32, y: u32| {
        sym += x.abs_diff(y) as u64;
        union += x.max(y) as u64;
    };
    // merge walk over the two sorted maps
    let mut ia = a.counts.iter().peekable();
    let mut ib = b.counts.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some((ta, &ca)), Some((tb, &cb))) => match ta.cmp(tb) {
                std::cmp::Ordering::Less => {
                    tally(ca, 0);
                    ia.next();
                }
                std::cmp::Ordering::Greater => {
                    tally(0, cb);
                    ib.next();
                }
                std::cmp::Ordering::Equal => {
                    tally(ca, cb);
                    ia.next();
                    ib.next();
                }
            },
            (Some((_, &ca)), None) => {
                tally(ca, 0);
                ia.next();
            }
            (None, Some((_, &cb))) => {
                tally(0, cb);
                ib.next();
            }
            (None, None) => break,
        }
    }
    if union == 0 {
        0.0
    } else {
        sym as f64 / union as f64
    }
}
