from hlestim.complexity import ComplexityParams, Method, run_method

if __name__ == '__main__':

    # (N, eta) = (152, 113) is the FeMo-cofactor active space
    for k in (1, 2, 3):
        print(f"k={k}")
        for method in Method:
            total, _ = run_method(ComplexityParams(152, 113, k, 1e-3, method))
            print(f"  {method.value:>8}: {total:.3e}")
