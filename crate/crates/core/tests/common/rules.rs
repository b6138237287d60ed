use rand::rngs::StdRng;
use rand::Rng;
use textfst_core::rewrite::{Item, RewriteRule, BOUNDARY};

pub const ABC: [&str; 3] = ["a", "b", "c"];

pub fn random_item(r: &mut StdRng, boundary: bool) -> Item {
    if boundary && r.gen_bool(0.15) {
        return Item::symbol(BOUNDARY);
    }
    if r.gen_bool(0.6) {
        Item::symbol(ABC[r.gen_range(0..3)])
    } else {
        let members: Vec<&str> = loop {
            let m: Vec<&str> = ABC.iter().copied().filter(|_| r.gen_bool(0.5)).collect();
            if !m.is_empty() {
                break m;
            }
        };
        Item::set("S", &members)
    }
}

pub fn random_rule(r: &mut StdRng) -> RewriteRule {
    let focus = (0..r.gen_range(1..=2)).map(|_| random_item(r, false)).collect();
    let alternatives = (0..r.gen_range(1..=3))
        .map(|_| {
            let out = (0..r.gen_range(0..=3)).map(|_| ["a", "b", "c", "x"][r.gen_range(0..4)].to_string()).collect();
            (out, r.gen_range(0..500) as f64 / 100.0)
        })
        .collect();
    let context = |r: &mut StdRng| -> Vec<Item> {
        (0..r.gen_range(0..=2))
            .map(|_| {
                let it = random_item(r, true);
                if r.gen_bool(0.3) {
                    it.starred()
                } else {
                    it
                }
            })
            .collect()
    };
    let left = context(r);
    let right = context(r);
    RewriteRule { focus, alternatives, left, right }
}

pub fn random_string(r: &mut StdRng, max: usize) -> Vec<String> {
    (0..r.gen_range(0..=max)).map(|_| ABC[r.gen_range(0..3)].to_string()).collect()
}
