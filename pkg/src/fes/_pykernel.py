"""Pure-Python evaluation kernel for the recursive FES semantics.

Reference implementation; `fes._ckernel` is the compiled twin with the same
contract.  The recursion follows the defining equations: the head variable's
inner fixpoint function is tabulated by one recursive solve per carrier
element, memoized per spec suffix, and the extremal fixpoint of the table is
taken by chain iteration when the table is monotone and by folding
pre/post-fixpoints otherwise.
"""

from __future__ import annotations

from .errors import SizeGuardExceeded

BACKEND_NAME = "python"


def _eval_program(prog, eta, m, meet, join, top, bot, op_tables, op_arities):
    stack = []
    i = 0
    n = len(prog)
    while i < n:
        code = prog[i]
        arg = prog[i + 1]
        i += 2
        if code == 0:
            stack.append(arg)
        elif code == 1:
            stack.append(eta[arg])
        elif code == 2:
            acc = top
            for _ in range(arg):
                acc = meet[acc * m + stack.pop()]
            stack.append(acc)
        elif code == 3:
            acc = bot
            for _ in range(arg):
                acc = join[acc * m + stack.pop()]
            stack.append(acc)
        else:
            arity = op_arities[arg]
            idx = 0
            place = 1
            for _ in range(arity):
                idx += stack.pop() * place
                place *= m
            stack.append(op_tables[arg][idx])
    return stack[-1]


def _table_fixpoint(table, sign, m, leq, meet, join, top, bot):
    monotone = True
    for a in range(m):
        base = a * m
        fa = table[a]
        for b in range(m):
            if leq[base + b] and not leq[fa * m + table[b]]:
                monotone = False
                break
        if not monotone:
            break
    if monotone:
        x = bot if sign == 0 else top
        for _ in range(m + 1):
            fx = table[x]
            if fx == x:
                return x
            x = fx
        raise AssertionError("monotone table failed to stabilize")
    if sign == 0:
        acc = top
        for x in range(m):
            if leq[table[x] * m + x]:
                acc = meet[acc * m + x]
    else:
        acc = bot
        for x in range(m):
            if leq[x * m + table[x]]:
                acc = join[acc * m + x]
    return acc


def solve_fes(enc, eta0, max_evals):
    """Solve the encoded Fes from valuation eta0 (a tuple of element indices).

    Returns (eta, evals) where evals counts right-hand-side evaluations; a
    run that would exceed max_evals raises SizeGuardExceeded.
    """
    m = enc.m
    leq = enc.leq
    meet = enc.meet
    join = enc.join
    top = enc.top
    bot = enc.bot
    programs = enc.programs
    op_tables = enc.op_tables
    op_arities = enc.op_arities
    signs = enc.spec_signs
    svars = enc.spec_vars
    depth_total = len(signs)
    memo = [dict() for _ in range(depth_total)]
    evals = [0]

    def sem(k, eta):
        if k == depth_total:
            return eta
        cached = memo[k].get(eta)
        if cached is not None:
            return cached
        xi = svars[k]
        prog = programs[xi]
        table = [0] * m
        for p in range(m):
            sub = sem(k + 1, eta[:xi] + (p,) + eta[xi + 1:])
            evals[0] += 1
            if evals[0] > max_evals:
                raise SizeGuardExceeded(
                    f"semantics exceeded {max_evals} inner evaluations")
            table[p] = _eval_program(prog, sub, m, meet, join, top, bot,
                                     op_tables, op_arities)
        fp = _table_fixpoint(table, signs[k], m, leq, meet, join, top, bot)
        result = sem(k + 1, eta[:xi] + (fp,) + eta[xi + 1:])
        memo[k][eta] = result
        return result

    return sem(0, tuple(eta0)), evals[0]
