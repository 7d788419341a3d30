# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled evaluation kernel: the C twin of fes._pykernel.

Same contract as `fes._pykernel.solve_fes`; lattice tables and right-hand
side programs run as C loops over int arrays, while the per-suffix memo
stays a Python dict keyed on valuation tuples.
"""

from cpython.array cimport array
from .errors import SizeGuardExceeded

BACKEND_NAME = "c"


cdef int _eval_program(int[:] prog, int start, int end, int[:] eta,
                       int m, int[:] meet, int[:] join_, int top, int bot,
                       int[:] op_tables, int[:] op_offsets, int[:] op_arities,
                       int[:] stack) nogil:
    cdef int sp = 0
    cdef int i = start
    cdef int code, arg, acc, k, arity, idx, place
    while i < end:
        code = prog[i]
        arg = prog[i + 1]
        i += 2
        if code == 0:
            stack[sp] = arg
            sp += 1
        elif code == 1:
            stack[sp] = eta[arg]
            sp += 1
        elif code == 2:
            acc = top
            for k in range(arg):
                sp -= 1
                acc = meet[acc * m + stack[sp]]
            stack[sp] = acc
            sp += 1
        elif code == 3:
            acc = bot
            for k in range(arg):
                sp -= 1
                acc = join_[acc * m + stack[sp]]
            stack[sp] = acc
            sp += 1
        else:
            arity = op_arities[arg]
            idx = 0
            place = 1
            for k in range(arity):
                sp -= 1
                idx += stack[sp] * place
                place *= m
            stack[sp] = op_tables[op_offsets[arg] + idx]
            sp += 1
    return stack[sp - 1]


cdef int _table_fixpoint(int[:] table, int sign, int m, int[:] leq,
                         int[:] meet, int[:] join_, int top, int bot) nogil:
    cdef bint monotone = True
    cdef int a, b, fa, x, fx, acc, step
    for a in range(m):
        fa = table[a]
        for b in range(m):
            if leq[a * m + b] and not leq[fa * m + table[b]]:
                monotone = False
                break
        if not monotone:
            break
    if monotone:
        x = bot if sign == 0 else top
        for step in range(m + 1):
            fx = table[x]
            if fx == x:
                return x
            x = fx
    if sign == 0:
        acc = top
        for x in range(m):
            if leq[table[x] * m + x]:
                acc = meet[acc * m + x]
    else:
        acc = bot
        for x in range(m):
            if leq[x * m + table[x]]:
                acc = join_[acc * m + x]
    return acc


cdef class _Solver:
    cdef int m, top, bot, depth_total, max_stack
    cdef long max_evals, evals
    cdef array leq, meet, join_, prog, prog_off, op_tables, op_offsets, op_arities
    cdef array stack, table, eta_buf
    cdef list memo
    cdef list signs, svars

    def __init__(self, enc, long max_evals):
        self.m = enc.m
        self.top = enc.top
        self.bot = enc.bot
        self.max_evals = max_evals
        self.evals = 0
        self.leq = array('i', enc.leq)
        self.meet = array('i', enc.meet)
        self.join_ = array('i', enc.join)
        flat = []
        offs = [0]
        for p in enc.programs:
            flat.extend(p)
            offs.append(len(flat))
        self.prog = array('i', flat if flat else [0])
        self.prog_off = array('i', offs)
        tflat = []
        toffs = []
        for t in enc.op_tables:
            toffs.append(len(tflat))
            tflat.extend(t)
        self.op_tables = array('i', tflat if tflat else [0])
        self.op_offsets = array('i', toffs if toffs else [0])
        self.op_arities = array('i', enc.op_arities if enc.op_arities else [0])
        self.signs = list(enc.spec_signs)
        self.svars = list(enc.spec_vars)
        self.depth_total = len(self.signs)
        self.memo = [dict() for _ in range(self.depth_total)]
        # stack depth is bounded by program length / 2
        self.max_stack = max(2, (max((len(p) for p in enc.programs), default=0) // 2) + 2)
        self.stack = array('i', [0] * self.max_stack)
        self.table = array('i', [0] * self.m)
        self.eta_buf = array('i', [0] * max(1, enc.n_vars))

    cdef tuple sem(self, int k, tuple eta):
        if k == self.depth_total:
            return eta
        cdef dict memo_k = <dict> self.memo[k]
        cached = memo_k.get(eta)
        if cached is not None:
            return cached
        cdef int xi = <int> self.svars[k]
        cdef int sign = <int> self.signs[k]
        cdef int m = self.m
        cdef int p, j
        cdef int start = self.prog_off.data.as_ints[xi]
        cdef int end = self.prog_off.data.as_ints[xi + 1]
        cdef tuple sub
        cdef array table = array('i', [0] * m)
        cdef int[:] eta_view
        for p in range(m):
            sub = self.sem(k + 1, eta[:xi] + (p,) + eta[xi + 1:])
            self.evals += 1
            if self.evals > self.max_evals:
                raise SizeGuardExceeded(
                    f"semantics exceeded {self.max_evals} inner evaluations")
            for j in range(len(sub)):
                self.eta_buf.data.as_ints[j] = <int> sub[j]
            table.data.as_ints[p] = _eval_program(
                self.prog, start, end, self.eta_buf, m,
                self.meet, self.join_, self.top, self.bot,
                self.op_tables, self.op_offsets, self.op_arities, self.stack)
        cdef int fp = _table_fixpoint(table, sign, m, self.leq,
                                      self.meet, self.join_, self.top, self.bot)
        cdef tuple result = self.sem(k + 1, eta[:xi] + (fp,) + eta[xi + 1:])
        memo_k[eta] = result
        return result


def solve_fes(enc, eta0, max_evals):
    """Solve the encoded Fes from valuation eta0 (tuple of element indices)."""
    solver = _Solver(enc, max_evals)
    result = solver.sem(0, tuple(eta0))
    return result, solver.evals
