from hlestim.fermion import identity_check, sector_norm_report

if __name__ == '__main__':

    for N, eta, k in ((2, 1, 1), (4, 2, 1), (6, 3, 2), (8, 4, 2)):
        report = sector_norm_report(N, eta, k)
        print(f"N={N} eta={eta} k={k}: brute={report.brute_norm:.6f} "
              f"closed={report.closed_coefficient:.6f} bound={report.upper_bound:g}")

    lhs, rhs = identity_check(152, 113, 3)
    print(f"identity at (152, 113, 3): {lhs} == {rhs}: {lhs == rhs}")
