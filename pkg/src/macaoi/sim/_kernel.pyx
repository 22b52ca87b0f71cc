# cython: language_level=3
"""Sequential slot loop for the two-source MAC queue.

Compiled with boundscheck/wraparound off; the Python wrapper in
`runner` owns all allocation and validation. `_kernel_py` provides a
vectorized numpy equivalent and `reference` a plain-Python one; the
three must implement identical slot semantics (see reference.step_slot
for the normative spelling).

Backends report the end-of-slot backlog trajectory rather than per-slot
departures: every delay/backlog metric is a local function of it
(cumulative departures satisfy D = A - B), which keeps tie-sensitive
comparisons away from long floating-point cumsums.
"""


def step_queue(double[::1] g1, double[::1] g2, double[::1] u2,
               double c1, double c2, double sigma2,
               double gamma1, double gamma2,
               double rate, double lam, double rho, double q2,
               bint queue_aware, double ceiling,
               double[::1] backlog_out,
               unsigned char[::1] s2_gen, unsigned char[::1] s2_ok):
    """Run the queue over len(g1) slots, filling the out arrays in place.

    Returns (final_backlog, overflow_slot); overflow_slot is -1 unless the
    backlog exceeded `ceiling`, in which case the loop stopped there and
    later array entries are left untouched.
    """
    cdef Py_ssize_t i, n = g1.shape[0]
    cdef Py_ssize_t overflow = -1
    cdef double backlog = 0.0
    cdef double a, q
    cdef bint s2_active, s1_tx, ok1, ok2

    with nogil:
        for i in range(n):
            a = lam
            if i == 0:
                a = a + rho
            q = backlog + a
            s2_active = u2[i] < q2
            s1_tx = (not queue_aware) or (q > 0.0)

            ok1 = False
            if s1_tx:
                if s2_active:
                    ok1 = c1 * g1[i] >= gamma1 * (c2 * g2[i] + sigma2)
                else:
                    ok1 = c1 * g1[i] >= gamma1 * sigma2
            if ok1:
                if rate < q:
                    backlog = q - rate
                else:
                    backlog = 0.0
            else:
                backlog = q
            backlog_out[i] = backlog

            s2_gen[i] = s2_active
            ok2 = False
            if s2_active:
                if s1_tx:
                    ok2 = c2 * g2[i] >= gamma2 * (c1 * g1[i] + sigma2)
                else:
                    ok2 = c2 * g2[i] >= gamma2 * sigma2
            s2_ok[i] = ok2

            if backlog > ceiling:
                overflow = i
                break

    return backlog, overflow
