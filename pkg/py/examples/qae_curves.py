from hlestim.probe import ProbeFamily, make_probe
from hlestim.qae import HALF_PI, max_mse

if __name__ == '__main__':

    for q in (4, 6, 8):
        sine = max_mse(make_probe(ProbeFamily.SINE_QAE, q), q, 2001)
        uniform = max_mse(make_probe(ProbeFamily.UNIFORM, q), q, 2 ** q + 1, 0.0, HALF_PI)
        print(f"q={q}  sine max mse={sine.max:.3e} at {sine.argmax:.4f}   "
              f"uniform max mse={uniform.max:.3e} (1/2^(q+1)={2.0 ** -(q + 1):.3e})")
