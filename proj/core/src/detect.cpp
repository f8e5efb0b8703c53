#include "blind_stbc/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace blind_stbc {

void EilsConfig::validate() const {
    if (max_executions < 1) throw std::invalid_argument("E-ILS: Q must be >= 1");
    if (majority_threshold < 1) throw std::invalid_argument("E-ILS: T must be >= 1");
    if (!(residual_match_tol >= 0.0)) {
        throw std::invalid_argument("E-ILS: residual match tolerance must be >= 0");
    }
    if (max_ils_iterations < 1) {
        throw std::invalid_argument("E-ILS: ILS iteration cap must be >= 1");
    }
}

ComplexMatrix coherent_ml(const ComplexMatrix& received, const ComplexMatrix& effective_h,
                          const Constellation& c) {
    return slice_matrix(solve_normal_eq(effective_h, received), c);
}

ComplexMatrix estimate_channel(const ComplexMatrix& stacked, const ComplexMatrix& symbols) {
    if (symbols.rows() != 2 || stacked.cols() != 2 || stacked.rows() != 2 * symbols.cols()) {
        throw DimensionError("estimate_channel: expected 2N x 2 signal and 2 x N symbols");
    }
    // Block n of C^H is [[conj(s1), -s2], [conj(s2), s1]].
    double energy = 0.0;
    ComplexMatrix g(2, 2);
    for (std::size_t n = 0; n < symbols.cols(); ++n) {
        const Complex s1 = symbols(0, n);
        const Complex s2 = symbols(1, n);
        energy += std::norm(s1) + std::norm(s2);
        for (std::size_t k = 0; k < 2; ++k) {
            const Complex top = stacked(2 * n, k);
            const Complex bottom = stacked(2 * n + 1, k);
            g(0, k) += std::conj(s1) * top - s2 * bottom;
            g(1, k) += std::conj(s2) * top + s1 * bottom;
        }
    }
    if (!(energy > 0.0)) {
        throw SingularError("estimate_channel: all-zero symbol matrix");
    }
    return (1.0 / energy) * std::move(g);
}

ComplexMatrix detect_symbols(const ComplexMatrix& received, const ComplexMatrix& channel,
                             const Constellation& c) {
    return slice_matrix(solve_normal_eq(equivalent_channel(channel), received), c);
}

double residual(const ComplexMatrix& received, const ComplexMatrix& equivalent_h,
                const ComplexMatrix& symbols) {
    return frobenius_sq(received - matmul(equivalent_h, symbols));
}

double structured_ls_residual(const ComplexMatrix& stacked, const ComplexMatrix& symbols) {
    const ComplexMatrix g = estimate_channel(stacked, symbols);
    return frobenius_sq(stacked - matmul(stack_codes(symbols), g));
}

double unstructured_ls_residual(const ComplexMatrix& received, const ComplexMatrix& symbols) {
    // H = Y S^H (S S^H)^-1, i.e. the LS solution of S^H H^H = Y^H.
    const ComplexMatrix h = hermitian(solve_normal_eq(hermitian(symbols), hermitian(received)));
    return residual(received, h, symbols);
}

double projection_criterion(const ComplexMatrix& received, const ComplexMatrix& symbols) {
    if (symbols.rows() != 2 || received.cols() != symbols.cols()) {
        throw DimensionError("projection_criterion: expected 2 x N symbols matching Y");
    }
    const ComplexMatrix sh = hermitian(symbols);
    const ComplexMatrix gram_inv = inverse_hermitian_2x2(matmul(symbols, sh));
    const ComplexMatrix projector =
        ComplexMatrix::identity(symbols.cols()) - matmul(matmul(sh, gram_inv), symbols);
    return frobenius_sq(matmul(received, projector));
}

DetectionResult ils(const ReceivedSignal& rx, const Constellation& c, ComplexMatrix init,
                    std::size_t max_iterations, std::vector<double>* residual_trace) {
    if (init.rows() != 2 || init.cols() != rx.blocks()) {
        throw DimensionError("ils: initial symbol matrix must be 2 x N");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("ils: max_iterations must be >= 1");
    }

    DetectionResult out;
    ComplexMatrix previous = std::move(init);
    for (std::size_t d = 1; d <= max_iterations; ++d) {
        ComplexMatrix g = estimate_channel(rx.stacked, previous);
        ComplexMatrix s = detect_symbols(rx.equivalent, g, c);
        ComplexMatrix h = equivalent_channel(g);
        const double r = residual(rx.equivalent, h, s);
        if (residual_trace != nullptr) {
            residual_trace->push_back(r);
        }

        const bool fixed_point = (s == previous);
        out.symbols = std::move(s);
        out.channel = std::move(g);
        out.equivalent_channel = std::move(h);
        out.residual = r;
        out.iterations = d;
        if (fixed_point) {
            out.converged = true;
            return out;
        }
        previous = out.symbols;
    }
    return out;
}

EilsResult eils(const ReceivedSignal& rx, const Constellation& c, const EilsConfig& cfg,
                RngStream& rng) {
    cfg.validate();
    const std::size_t blocks = rx.blocks();
    const std::size_t failure_budget = 10 * cfg.max_executions + 10;

    EilsResult out;
    std::optional<DetectionResult> best;
    std::optional<DetectionResult> best_unconverged;
    double min_residual = std::numeric_limits<double>::infinity();

    while (out.executions < cfg.max_executions && !out.stopped_by_majority) {
        DetectionResult run;
        try {
            run = ils(rx, c, random_symbol_matrix(blocks, c, rng), cfg.max_ils_iterations);
        } catch (const SingularError&) {
            if (++out.failed_runs > failure_budget) break;
            continue;
        }
        if (!run.converged) {
            if (!best_unconverged || run.residual < best_unconverged->residual) {
                best_unconverged = run;
            }
            if (++out.failed_runs > failure_budget) break;
            continue;
        }

        const double r = run.residual;
        const double match_tol = cfg.residual_match_tol * std::max(r, 1.0);
        ++out.executions;
        out.total_ils_iterations += run.iterations;

        if (r <= min_residual) {
            std::size_t matches = 0;
            for (const double previous : out.residual_history) {
                if (std::abs(r - previous) <= match_tol) ++matches;
            }
            // Strict improvement replaces the incumbent; on an exact tie the first one stays.
            if (r < min_residual) {
                min_residual = r;
                best = std::move(run);
            }
            if (matches >= cfg.majority_threshold) {
                out.stopped_by_majority = true;
            }
        }
        out.residual_history.push_back(r);
    }

    if (best) {
        out.best = std::move(*best);
    } else if (best_unconverged) {
        // Every run cycled: fall back to the best capped run rather than fail.
        out.best = std::move(*best_unconverged);
        out.executions = 1;
        out.total_ils_iterations = out.best.iterations;
        out.residual_history.assign(1, out.best.residual);
    } else {
        throw SingularError("eils: every ILS run hit a singular system");
    }
    return out;
}

OracleResult exhaustive_ls(const ReceivedSignal& rx, const Constellation& c, std::uint64_t cap) {
    const std::size_t blocks = rx.blocks();
    const std::size_t slots = 2 * blocks;
    const std::uint64_t alphabet = c.size();

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < slots; ++i) {
        if (total > cap / alphabet) {
            throw EnumerationTooLarge("exhaustive_ls: " + std::to_string(alphabet) + "^" +
                                      std::to_string(slots) + " candidates exceed cap " +
                                      std::to_string(cap));
        }
        total *= alphabet;
    }

    OracleResult out;
    out.residual = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> digits(slots, 0);
    ComplexMatrix s(2, blocks);
    for (std::uint64_t k = 0; k < total; ++k) {
        for (std::size_t i = 0; i < slots; ++i) {
            s(i % 2, i / 2) = c.points()[digits[i]];
        }
        double r = 0.0;
        try {
            r = structured_ls_residual(rx.stacked, s);
        } catch (const SingularError&) {
            r = std::numeric_limits<double>::infinity();
        }
        ++out.candidates;
        if (r < out.residual) {
            out.residual = r;
            out.symbols = s;
        }
        for (std::size_t i = 0; i < slots; ++i) {
            if (++digits[i] < alphabet) break;
            digits[i] = 0;
        }
    }
    if (out.symbols.empty()) {
        throw SingularError("exhaustive_ls: every candidate was rank deficient");
    }
    return out;
}

}  // namespace blind_stbc
