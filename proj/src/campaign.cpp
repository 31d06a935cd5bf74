#include "ffr/campaign.hpp"

#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ffr/error.hpp"
#include "ffr/textio.hpp"

namespace ffr {

namespace {

std::vector<int> observed_columns(const SimModel& m, const Stimulus& stimulus) {
    std::vector<int> cols;
    if (!stimulus.observe) {
        cols.resize(m.pos.size());
        for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = static_cast<int>(i);
        return cols;
    }
    for (std::size_t i = 0; i < m.pos.size(); ++i) {
        const std::string& name = m.netlist->po_signal_name(m.pos[i]);
        for (const auto& obs : *stimulus.observe)
            if (obs == name) {
                cols.push_back(static_cast<int>(i));
                break;
            }
    }
    return cols;
}

} // namespace

CampaignResult run_campaign(const Netlist& netlist, const Stimulus& stimulus,
                            const std::map<std::string, double>& fit_overrides,
                            double default_fit, const CampaignOptions& options) {
    SimModel m = compile_sim(netlist, stimulus);
    if (m.dffs.empty()) throw DataError("campaign needs at least one flip-flop");
    for (const auto& [name, fit] : fit_overrides) {
        int ci = netlist.cell_index(name);
        if (ci < 0 || netlist.cells[ci].kind != GateKind::Dff)
            throw DataError("fit override names unknown flip-flop '" + name + "'");
        (void)fit;
    }

    const std::size_t T = stimulus.cycles();
    const std::size_t n_ff = m.dffs.size();
    const std::size_t n_po = m.pos.size();

    // Golden reference: per-cycle PO vectors plus the state entering each
    // cycle, so an injection at cycle c can start from the snapshot.
    std::vector<std::uint8_t> golden_po(T * n_po, 0);
    std::vector<std::uint8_t> golden_state((T + 1) * n_ff, 0);
    std::vector<std::vector<std::uint8_t>> pi_rows(T, std::vector<std::uint8_t>(m.pis.size(), 0));
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < m.pis.size(); ++i)
            pi_rows[t][i] = stimulus.vectors[t][m.stim_column[i]];

    {
        std::vector<std::uint8_t> state = m.init_state;
        std::vector<std::uint8_t> next_state(n_ff);
        std::vector<std::uint8_t> values(m.num_cells(), 0);
        for (std::size_t t = 0; t < T; ++t) {
            std::memcpy(golden_state.data() + t * n_ff, state.data(), n_ff);
            m.eval_cycle(pi_rows[t], state, values, golden_po.data() + t * n_po, &next_state);
            state.swap(next_state);
        }
        std::memcpy(golden_state.data() + T * n_ff, state.data(), n_ff);
    }

    const std::vector<int> obs = observed_columns(m, stimulus);

    // Parallel map over the flat (ff, cycle) space. Every worker writes
    // only its own outcome slot; the reduction below is serial and
    // index-ordered, so results do not depend on scheduling.
    const std::size_t total = n_ff * T;
    std::vector<std::uint8_t> failed(total, 0);

#ifdef _OPENMP
    int threads = options.jobs > 0 ? options.jobs : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
#endif
    {
        std::vector<std::uint8_t> state(n_ff);
        std::vector<std::uint8_t> next_state(n_ff);
        std::vector<std::uint8_t> values(m.num_cells(), 0);
        std::vector<std::uint8_t> po_row(n_po, 0);

#ifdef _OPENMP
#pragma omp for schedule(dynamic, 16)
#endif
        for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
            const std::size_t f = static_cast<std::size_t>(idx) / T;
            const std::size_t c = static_cast<std::size_t>(idx) % T;

            std::memcpy(state.data(), golden_state.data() + c * n_ff, n_ff);
            state[f] ^= 1;

            std::uint8_t fail = 0;
            for (std::size_t t = c; t < T && !fail; ++t) {
                m.eval_cycle(pi_rows[t], state, values, po_row.data(), &next_state);
                const std::uint8_t* gold = golden_po.data() + t * n_po;
                for (int col : obs)
                    if (po_row[col] != gold[col]) {
                        fail = 1;
                        break;
                    }
                state.swap(next_state);
            }
            failed[idx] = fail;
        }
    }

    CampaignResult result;
    result.cycles = T;
    result.per_ff.reserve(n_ff);
    for (std::size_t f = 0; f < n_ff; ++f) {
        FfResult r;
        r.ff = m.dffs[f];
        r.name = netlist.cells[r.ff].name;
        r.injections = T;
        std::uint64_t count = 0;
        for (std::size_t c = 0; c < T; ++c) count += failed[f * T + c];
        r.failure_count = count;
        auto it = fit_overrides.find(r.name);
        r.fit = it == fit_overrides.end() ? default_fit : it->second;
        r.ffr = r.fit * static_cast<double>(count) / static_cast<double>(T);
        result.per_ff.push_back(std::move(r));
    }
    result.aggregate_ffr = aggregate_ffr(result);
    return result;
}

double aggregate_ffr(const CampaignResult& result) {
    double sum = 0.0;
    for (const auto& r : result.per_ff) sum += r.ffr;
    return sum;
}

std::string campaign_to_csv(const CampaignResult& result) {
    std::string out = "ff_name,failure_count,cycles,fit,ffr\n";
    std::uint64_t total_failures = 0;
    for (const auto& r : result.per_ff) {
        out += r.name + ',' + std::to_string(r.failure_count) + ',' + std::to_string(r.injections) +
               ',' + fmt_double(r.fit) + ',' + fmt_double(r.ffr) + '\n';
        total_failures += r.failure_count;
    }
    out += "TOTAL," + std::to_string(total_failures) + ',' + std::to_string(result.cycles) + ",," +
           fmt_double(result.aggregate_ffr) + '\n';
    return out;
}

CampaignResult campaign_from_csv(const std::string& text) {
    CampaignResult result;
    std::size_t pos = 0;
    int line_no = 0;
    bool saw_total = false;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "ff_name,failure_count,cycles,fit,ffr")
                throw ParseError("bad campaign CSV header", 1);
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 5) throw ParseError("campaign CSV row needs 5 fields", line_no);
        if (fields[0] == "TOTAL") {
            result.cycles = static_cast<std::uint64_t>(parse_int(fields[2], line_no));
            result.aggregate_ffr = parse_double(fields[4], line_no);
            saw_total = true;
            continue;
        }
        FfResult r;
        r.name = fields[0];
        r.failure_count = static_cast<std::uint64_t>(parse_int(fields[1], line_no));
        r.injections = static_cast<std::uint64_t>(parse_int(fields[2], line_no));
        r.fit = parse_double(fields[3], line_no);
        r.ffr = parse_double(fields[4], line_no);
        result.per_ff.push_back(std::move(r));
    }
    if (!saw_total) throw ParseError("campaign CSV missing TOTAL row");
    return result;
}

} // namespace ffr
