#ifndef SVDUP_SVDUP_HPP
#define SVDUP_SVDUP_HPP

#include "svdup/baselines.hpp"
#include "svdup/block_cg.hpp"
#include "svdup/cli.hpp"
#include "svdup/dense_matrix.hpp"
#include "svdup/errors.hpp"
#include "svdup/flops.hpp"
#include "svdup/harness.hpp"
#include "svdup/jacobi_svd.hpp"
#include "svdup/lanczos.hpp"
#include "svdup/linear_operator.hpp"
#include "svdup/matrix_market.hpp"
#include "svdup/projection_basis.hpp"
#include "svdup/qr.hpp"
#include "svdup/resolvent.hpp"
#include "svdup/rng.hpp"
#include "svdup/sparse_matrix.hpp"
#include "svdup/tridiag_eig.hpp"
#include "svdup/truncated_svd.hpp"
#include "svdup/update.hpp"
#include "svdup/update_problem.hpp"

#endif
