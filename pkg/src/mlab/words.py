"""Free-group words and Dehn's algorithm for the surface group.

A word is a tuple of nonzero ints; negation is inversion.  Surface words
use letters +-(e+1) where e < 2g indexes the scheme edges in the order
a1, b1, a2, b2, ..., ag, bg.  The genus-g surface relator is the product
of commutators [a_i, b_i]; it satisfies the small-cancellation condition
C'(1/6) for every g >= 2, so Dehn's algorithm decides the word problem.
"""

from functools import lru_cache

from .errors import PreconditionError


def inverse(word):
    return tuple(-x for x in reversed(word))


def free_reduce(word):
    out = []
    for x in word:
        if x == 0:
            raise PreconditionError("zero letter in word")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def rotations(word):
    n = len(word)
    return [word[i:] + word[:i] for i in range(n)] if n else [()]


def least_rotation(word):
    return min(rotations(word)) if word else ()


def surface_relator(g):
    rel = []
    for h in range(g):
        a, b = 2 * h + 1, 2 * h + 2
        rel += [a, b, -a, -b]
    return tuple(rel)


@lru_cache(maxsize=None)
def _relator_rotations(g):
    rel = surface_relator(g)
    rots = set()
    for r in (rel, inverse(rel)):
        rots.update(rotations(r))
    return tuple(sorted(rots))


def _find_big_piece(word, g):
    """Locate a cyclic subword of `word` matching more than half of a
    relator rotation.  Returns (start, length, replacement) or None."""
    n = len(word)
    L = 4 * g
    half = 2 * g
    if n == 0:
        return None
    doubled = word + word
    cap = min(L, n)
    for rot in _relator_rotations(g):
        # longest prefix of rot appearing as a cyclic subword
        for start in range(n):
            m = 0
            while m < cap and doubled[start + m] == rot[m]:
                m += 1
            if m > half:
                # rot = s . t with s matched, so s = t^{-1} in the group
                replacement = inverse(rot[m:])
                return start, m, replacement
    return None


def dehn_reduce_cyclic(word, g):
    """Repeatedly shorten a cyclic word with Dehn's algorithm.

    Returns a cyclically reduced word with no cyclic subword longer than
    half a relator; the result is empty iff the input is trivial in the
    genus-g surface group.
    """
    w = cyclic_reduce(word)
    while True:
        hit = _find_big_piece(w, g)
        if hit is None:
            return w
        start, m, repl = hit
        n = len(w)
        rest = (w + w)[start + m : start + n]
        w = cyclic_reduce(repl + rest)


def is_trivial_surface_word(word, g):
    return len(dehn_reduce_cyclic(word, g)) == 0


def dehn_reduce_linear(word, g):
    """Shorten a based (non-cyclic) word with Dehn's algorithm.

    The result represents the same group element; it is empty iff the
    element is trivial.
    """
    w = free_reduce(word)
    L = 4 * g
    half = 2 * g
    while True:
        n = len(w)
        found = None
        for rot in _relator_rotations(g):
            for start in range(n):
                m = 0
                while m < min(L, n - start) and w[start + m] == rot[m]:
                    m += 1
                if m > half:
                    found = (start, m, inverse(rot[m:]))
                    break
            if found:
                break
        if not found:
            return w
        start, m, repl = found
        w = free_reduce(w[:start] + repl + w[start + m :])


def conjugate_words(w1, w2, g, cap=4096):
    """Exact conjugacy test in the genus-g surface group.

    Both words are Dehn-reduced cyclically; reduced conjugates have equal
    length and are related by rotations and exact-half relator swaps, which
    are explored by BFS.
    """
    a = dehn_reduce_cyclic(w1, g)
    b = dehn_reduce_cyclic(w2, g)
    if len(a) != len(b):
        return False
    if len(a) == 0:
        return True
    targets = set(rotations(b))
    half = 2 * g
    seen = set()
    frontier = [a]
    while frontier:
        if len(seen) > cap:
            raise PreconditionError("conjugacy search exceeded cap")
        w = frontier.pop()
        for rot_w in rotations(w):
            if rot_w in targets:
                return True
            if rot_w in seen:
                continue
            seen.add(rot_w)
            n = len(rot_w)
            doubled = rot_w + rot_w
            for rel in _relator_rotations(g):
                for start in range(n):
                    if doubled[start : start + half] == rel[:half]:
                        repl = inverse(rel[half:])
                        rest = doubled[start + half : start + n]
                        cand = cyclic_reduce(repl + rest)
                        if len(cand) == len(rot_w) and cand not in seen:
                            frontier.append(cand)
    return False


def handlebody_word(surface_word):
    """Image in pi1 of the handlebody: kill b-letters, a_i -> x_i.

    Surface letter +-(2i-1) (a_i) maps to +-i; +-(2i) (b_i) dies.
    Returns the cyclically reduced image word over letters +-1..+-g.
    """
    out = []
    for x in surface_word:
        mag = abs(x)
        if mag % 2 == 1:  # a-letter
            xi = (mag + 1) // 2
            out.append(xi if x > 0 else -xi)
    return cyclic_reduce(tuple(out))


def word_canonical(word):
    """Deterministic conjugacy-class representative: the lexicographically
    least rotation of the cyclically reduced word."""
    return least_rotation(cyclic_reduce(word))


def abelianize(surface_word, g):
    """Homology class in Z^{2g}, basis (a1, b1, ..., ag, bg)."""
    h = [0] * (2 * g)
    for x in surface_word:
        h[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(h)
