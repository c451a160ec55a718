//! Gadget wiring. Square `Q_i` has black vertices `v1..v4`; its solid
//! matching `M0` is `{v1–v2, v3–v4}` and the complementary `M1` is
//! `{v1–v4, v2–v3}`. Patterns are `(square, bit)` lists with `M1 = true`.

use crate::abg::Square;

use super::{Extension, Flower, Pattern, Port};

const M0: bool = false;
const M1: bool = true;

/// The seven fixed edges shared by variable and clause gadgets, without the
/// middle edge `q2v1–q5v3` which is added separately since it may be
/// extended.
const HEXAGON_EDGES: [((usize, usize), (usize, usize)); 6] = [
    ((1, 2), (2, 4)),
    ((1, 1), (4, 3)),
    ((2, 2), (3, 4)),
    ((3, 1), (6, 3)),
    ((4, 2), (5, 4)),
    ((5, 2), (6, 4)),
];
const MIDDLE_EDGE: ((usize, usize), (usize, usize)) = ((2, 1), (5, 3));
const THETA_LEFT: [(usize, bool); 4] = [(1, M0), (2, M1), (4, M1), (5, M0)];
const THETA_RIGHT: [(usize, bool); 4] = [(2, M0), (3, M1), (5, M1), (6, M0)];

pub(super) struct Builder {
    pub p: usize,
    pub ell: usize,
    pub vertex_count: u32,
    pub squares: Vec<Square>,
    pub edges: Vec<(u32, u32)>,
    pub flowers: Vec<Flower>,
    pub extensions: Vec<Extension>,
}

/// Squares of one gadget, addressed 1-based as `(square, vertex)`.
pub(super) struct Block {
    pub squares: Vec<(u32, [u32; 4])>,
}

impl Block {
    pub fn v(&self, (i, j): (usize, usize)) -> u32 {
        self.squares[i - 1].1[j - 1]
    }

    pub fn id(&self, i: usize) -> u32 {
        self.squares[i - 1].0
    }

    pub fn pattern(&self, bits: &[(usize, bool)]) -> Pattern {
        bits.iter().map(|&(i, b)| (self.id(i), b)).collect()
    }

    pub fn port(&self, a: (usize, usize), b: (usize, usize), bits: &[(usize, bool)]) -> Port {
        Port {
            ends: (self.v(a), self.v(b)),
            path: self.pattern(bits),
        }
    }
}

pub(super) struct VariableParts {
    pub block: Block,
    pub theta_t: Pattern,
    pub theta_f: Pattern,
    pub t_ports: Vec<Port>,
    pub f_port: Port,
    pub flowers: Vec<usize>,
    pub extension: Option<usize>,
}

pub(super) struct OccurrenceParts {
    pub block: Block,
    pub x_port: Port,
    pub y_port: Port,
    pub flower: usize,
    pub extension: Option<usize>,
}

pub(super) struct ClauseParts {
    pub block: Block,
    pub thetas: Vec<Pattern>,
    pub ports: Vec<Port>,
    pub flowers: Vec<usize>,
    pub extensions: Vec<usize>,
}

fn with_chain(mut p: Pattern, chain: &Pattern) -> Pattern {
    p.extend_from_slice(chain);
    p.sort_unstable();
    p
}

impl Builder {
    /// `k` must be even and at least 8.
    pub fn new(k: u32) -> Self {
        Builder {
            p: k as usize / 2 + 1,
            ell: (k as usize - 8) / 2,
            vertex_count: 0,
            squares: Vec::new(),
            edges: Vec::new(),
            flowers: Vec::new(),
            extensions: Vec::new(),
        }
    }

    fn square(&mut self) -> (u32, [u32; 4]) {
        let b = self.vertex_count;
        self.vertex_count += 4;
        let id = self.squares.len() as u32;
        self.squares.push(Square::new(b, b + 2, b + 1, b + 3));
        (id, [b, b + 1, b + 2, b + 3])
    }

    fn block(&mut self, n: usize) -> Block {
        Block {
            squares: (0..n).map(|_| self.square()).collect(),
        }
    }

    pub fn edge(&mut self, x: u32, y: u32) {
        self.edges.push((x, y));
    }

    /// `p` flower squares `(a, â, b, b̂)` with solid matching `{a–b, â–b̂}`,
    /// chained by `b_i–a_{i+1}` and `b̂_i–â_{i+1}`, closed by `b̂_p–â_1`; the
    /// missing edge `b_p–a_1` is replaced by `x–a_1` and `y–b_p`.
    pub fn open_flower(&mut self, x: u32, y: u32) -> usize {
        let squares = self.flower_squares(self.p);
        let v = |i: usize| squares_vertices(&self.squares, squares[i]);
        let p = self.p;
        let mut edges = Vec::with_capacity(2 * p + 1);
        for i in 0..p - 1 {
            let (_, _, b, b_hat) = v(i);
            let (a, a_hat, _, _) = v(i + 1);
            edges.push((b, a));
            edges.push((b_hat, a_hat));
        }
        let (a1, a1_hat, _, _) = v(0);
        let (_, _, bp, bp_hat) = v(p - 1);
        edges.push((bp_hat, a1_hat));
        edges.push((x, a1));
        edges.push((y, bp));
        self.edges.extend(edges);
        self.flowers.push(Flower {
            squares,
            p,
            anchors: (x, y),
        });
        self.flowers.len() - 1
    }

    fn flower_squares(&mut self, p: usize) -> Vec<u32> {
        (0..p)
            .map(|_| {
                let a = self.vertex_count;
                self.vertex_count += 4;
                self.squares.push(Square::new(a, a + 1, a + 2, a + 3));
                self.squares.len() as u32 - 1
            })
            .collect()
    }

    /// A closed `p`-flower on its own.
    pub fn closed_flower(&mut self, p: usize) -> Vec<u32> {
        let squares = self.flower_squares(p);
        for i in 0..p {
            let (_, _, b, b_hat) = squares_vertices(&self.squares, squares[i]);
            let (a, a_hat, _, _) = squares_vertices(&self.squares, squares[(i + 1) % p]);
            self.edges.push((b, a));
            self.edges.push((b_hat, a_hat));
        }
        squares
    }

    /// Join `x` and `y`, through a chain of `ℓ` flower-plugged squares when
    /// `ℓ > 0`. Returns the extension index and the chain's solid pattern.
    pub fn extended_edge(&mut self, x: u32, y: u32) -> (Option<usize>, Pattern) {
        if self.ell == 0 {
            self.edge(x, y);
            return (None, Vec::new());
        }
        let mut prev = x;
        let mut squares = Vec::with_capacity(self.ell);
        let mut flowers = Vec::with_capacity(self.ell);
        for _ in 0..self.ell {
            let (id, [v1, v2, v3, v4]) = self.square();
            self.edge(prev, v4);
            flowers.push(self.open_flower(v1, v2));
            squares.push(id);
            prev = v3;
        }
        self.edge(prev, y);
        let chain = squares.iter().map(|&s| (s, M0)).collect();
        self.extensions.push(Extension {
            squares,
            flowers,
            ends: (x, y),
        });
        (Some(self.extensions.len() - 1), chain)
    }

    fn hexagon(&mut self, b: &Block) -> (Option<usize>, Pattern) {
        for (x, y) in HEXAGON_EDGES {
            self.edge(b.v(x), b.v(y));
        }
        self.extended_edge(b.v(MIDDLE_EDGE.0), b.v(MIDDLE_EDGE.1))
    }

    /// Variable gadget: `two_occurrence` selects the TF form with a single
    /// `T` port and a third flower.
    pub fn variable(&mut self, two_occurrence: bool) -> VariableParts {
        let b = self.block(6);
        let (extension, chain) = self.hexagon(&b);
        let mut t_ports = vec![b.port((1, 3), (2, 3), &[(1, M1), (2, M0)])];
        if !two_occurrence {
            t_ports.push(b.port((4, 1), (5, 1), &[(4, M0), (5, M1)]));
        }
        let f_port = b.port((3, 2), (6, 2), &[(3, M0), (6, M1)]);
        let mut flowers = vec![
            self.open_flower(b.v((1, 4)), b.v((4, 4))),
            self.open_flower(b.v((3, 3)), b.v((6, 1))),
        ];
        if two_occurrence {
            flowers.push(self.open_flower(b.v((4, 1)), b.v((5, 1))));
        }
        VariableParts {
            theta_t: with_chain(b.pattern(&THETA_RIGHT), &chain),
            theta_f: with_chain(b.pattern(&THETA_LEFT), &chain),
            block: b,
            t_ports,
            f_port,
            flowers,
            extension,
        }
    }

    /// W gadget of one literal occurrence.
    pub fn occurrence(&mut self) -> OccurrenceParts {
        let b = self.block(2);
        let (extension, chain) = self.extended_edge(b.v((1, 4)), b.v((2, 1)));
        let mut x_port = b.port((1, 1), (2, 4), &[(1, M1), (2, M1)]);
        let mut y_port = b.port((1, 3), (2, 2), &[(1, M0), (2, M0)]);
        x_port.path = with_chain(x_port.path, &chain);
        y_port.path = with_chain(y_port.path, &chain);
        let flower = self.open_flower(b.v((1, 2)), b.v((2, 3)));
        OccurrenceParts {
            block: b,
            x_port,
            y_port,
            flower,
            extension,
        }
    }

    pub fn clause(&mut self, size: usize) -> ClauseParts {
        let b = self.block(6);
        let (mid, chain) = self.hexagon(&b);
        let mut thetas = vec![
            with_chain(b.pattern(&THETA_LEFT), &chain),
            with_chain(b.pattern(&THETA_RIGHT), &chain),
        ];
        let mut extensions: Vec<usize> = mid.into_iter().collect();
        let mut flowers = Vec::new();
        let ports = if size == 2 {
            flowers.push(self.open_flower(b.v((1, 3)), b.v((4, 1))));
            flowers.push(self.open_flower(b.v((2, 3)), b.v((3, 3))));
            flowers.push(self.open_flower(b.v((3, 2)), b.v((6, 2))));
            vec![
                b.port((1, 4), (4, 4), &[(1, M1), (4, M0)]),
                b.port((5, 1), (6, 1), &[(5, M0), (6, M1)]),
            ]
        } else {
            self.edge(b.v((3, 2)), b.v((4, 4)));
            let (ext, chain3) = self.extended_edge(b.v((1, 4)), b.v((6, 2)));
            extensions.extend(ext);
            thetas.push(with_chain(
                b.pattern(&[(1, M1), (3, M0), (4, M0), (6, M1)]),
                &chain3,
            ));
            vec![
                b.port((1, 3), (2, 3), &[(1, M1), (2, M0)]),
                b.port((5, 1), (6, 1), &[(5, M0), (6, M1)]),
                b.port((3, 3), (4, 1), &[(3, M1), (4, M1)]),
            ]
        };
        ClauseParts {
            block: b,
            thetas,
            ports,
            flowers,
            extensions,
        }
    }

    /// Merge two ports first-to-first and second-to-second.
    pub fn merge(&mut self, a: &Port, b: &Port) {
        self.edge(a.ends.0, b.ends.0);
        self.edge(a.ends.1, b.ends.1);
    }
}

fn squares_vertices(squares: &[Square], id: u32) -> (u32, u32, u32, u32) {
    let s = &squares[id as usize];
    (s.u, s.u_hat, s.v, s.v_hat)
}
