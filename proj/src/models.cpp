#include "surgecast/models.hpp"

#include <cmath>

#include "surgecast/error.hpp"
#include "surgecast/rng.hpp"

namespace surgecast {

using nn::RunMode;

Architecture architecture_from_string(const std::string& name) {
    if (name == "lstm") return Architecture::lstm;
    if (name == "stacked_lstm") return Architecture::stacked_lstm;
    if (name == "bilstm") return Architecture::bilstm;
    if (name == "seq2seq_attention") return Architecture::seq2seq_attention;
    throw ConfigError("unknown architecture '" + name +
                      "' (expected lstm, stacked_lstm, bilstm or seq2seq_attention)");
}

std::string to_string(Architecture arch) {
    switch (arch) {
    case Architecture::lstm: return "lstm";
    case Architecture::stacked_lstm: return "stacked_lstm";
    case Architecture::bilstm: return "bilstm";
    case Architecture::seq2seq_attention: return "seq2seq_attention";
    }
    throw ConfigError("unknown architecture tag");
}

std::vector<int> default_hidden_sizes(Architecture arch) {
    switch (arch) {
    case Architecture::lstm: return {64};
    case Architecture::stacked_lstm: return {128, 64, 32};
    case Architecture::bilstm: return {64};
    case Architecture::seq2seq_attention: return {64, 64};
    }
    throw ConfigError("unknown architecture tag");
}

ModelConfig resolve_config(ModelConfig config) {
    if (config.hidden_sizes.empty()) {
        config.hidden_sizes = default_hidden_sizes(config.architecture);
    }
    std::size_t arity = 1;
    switch (config.architecture) {
    case Architecture::lstm:
    case Architecture::bilstm: arity = 1; break;
    case Architecture::stacked_lstm: arity = 3; break;
    case Architecture::seq2seq_attention: arity = 2; break;
    }
    if (config.hidden_sizes.size() != arity) {
        throw ConfigError(to_string(config.architecture) + " expects " + std::to_string(arity) +
                          " hidden sizes, got " + std::to_string(config.hidden_sizes.size()));
    }
    for (int h : config.hidden_sizes) {
        if (h < 1) throw ConfigError("hidden sizes must be positive");
    }
    if (config.architecture == Architecture::seq2seq_attention &&
        config.hidden_sizes[0] != config.hidden_sizes[1]) {
        // The decoder starts from the encoder's final state, so the sizes
        // must agree.
        throw ConfigError("seq2seq_attention requires equal encoder/decoder sizes");
    }
    if (config.dropout_rate < 0.0 || config.dropout_rate >= 1.0) {
        throw ConfigError("dropout_rate must lie in [0, 1)");
    }
    if (config.input_features < 1) throw ConfigError("input_features must be positive");
    if (config.lag < 1) throw ConfigError("lag must be positive");
    return config;
}

namespace {

using ShapeList = std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>>;

void push_lstm_shapes(ShapeList& shapes, const std::string& prefix, std::size_t in,
                      std::size_t hidden) {
    shapes.push_back({prefix + ".wx", {in, 4 * hidden}});
    shapes.push_back({prefix + ".wh", {hidden, 4 * hidden}});
    shapes.push_back({prefix + ".b", {1, 4 * hidden}});
}

} // namespace

ShapeList parameter_shapes(const ModelConfig& raw) {
    ModelConfig config = resolve_config(raw);
    const auto f = static_cast<std::size_t>(config.input_features);
    const auto& hs = config.hidden_sizes;
    ShapeList shapes;
    switch (config.architecture) {
    case Architecture::lstm: {
        auto h = static_cast<std::size_t>(hs[0]);
        push_lstm_shapes(shapes, "lstm", f, h);
        shapes.push_back({"head.w", {h, 1}});
        break;
    }
    case Architecture::stacked_lstm: {
        std::size_t in = f;
        for (std::size_t l = 0; l < hs.size(); ++l) {
            auto h = static_cast<std::size_t>(hs[l]);
            push_lstm_shapes(shapes, "lstm" + std::to_string(l), in, h);
            in = h;
        }
        shapes.push_back({"head.w", {in, 1}});
        break;
    }
    case Architecture::bilstm: {
        auto h = static_cast<std::size_t>(hs[0]);
        push_lstm_shapes(shapes, "fwd", f, h);
        push_lstm_shapes(shapes, "bwd", f, h);
        shapes.push_back({"head.w", {2 * h, 1}});
        break;
    }
    case Architecture::seq2seq_attention: {
        auto he = static_cast<std::size_t>(hs[0]);
        auto hd = static_cast<std::size_t>(hs[1]);
        push_lstm_shapes(shapes, "enc", f, he);
        push_lstm_shapes(shapes, "dec", he, hd);
        shapes.push_back({"head.w", {hd + he, 1}});
        break;
    }
    }
    shapes.push_back({"head.b", {1, 1}});
    return shapes;
}

const Tensor2& Model::param(const std::string& name) const {
    for (std::size_t i = 0; i < param_names.size(); ++i) {
        if (param_names[i] == name) return params[i];
    }
    throw ConfigError("model has no parameter named '" + name + "'");
}

Tensor2& Model::param(const std::string& name) {
    return const_cast<Tensor2&>(static_cast<const Model*>(this)->param(name));
}

Model init_model(const ModelConfig& raw) {
    Model model;
    model.config = resolve_config(raw);
    rng::Engine eng(model.config.init_seed);
    for (const auto& [name, shape] : parameter_shapes(model.config)) {
        Tensor2 t(shape.first, shape.second);
        const bool is_bias = name.size() > 2 && name.compare(name.size() - 2, 2, ".b") == 0;
        if (is_bias) {
            if (name != "head.b") {
                // Gate packing [i | f | g | o]: forget slice starts at 1.
                std::size_t h = shape.second / 4;
                for (std::size_t j = h; j < 2 * h; ++j) t(0, j) = 1.0;
            }
        } else {
            double limit = std::sqrt(6.0 / static_cast<double>(shape.first + shape.second));
            for (double& v : t.data()) v = rng::uniform_sym(eng, limit);
        }
        model.param_names.push_back(name);
        model.params.push_back(std::move(t));
    }
    return model;
}

// ---------------------------------------------------------------------------
// lstm layer with cached intermediates for backpropagation through time

namespace {

struct LstmLayerCache {
    Tensor2 x;  // T x F input sequence
    Tensor2 h0; // 1 x H initial hidden state
    Tensor2 c0; // 1 x H initial cell state
    Tensor2 i, f, g, o, c, tanh_c, h; // T x H each
};

void check_cell_shapes(const Tensor2& wx, const Tensor2& wh, const Tensor2& b,
                       std::size_t in, std::size_t state) {
    const std::size_t h = wh.rows();
    if (wx.cols() != 4 * h || wh.cols() != 4 * h || b.rows() != 1 || b.cols() != 4 * h) {
        throw ShapeError("lstm gate tensors disagree: wx " + wx.shape_str() + ", wh " +
                         wh.shape_str() + ", b " + b.shape_str());
    }
    if (wx.rows() != in) {
        throw ShapeError("lstm input size " + std::to_string(in) + " vs wx " + wx.shape_str());
    }
    if (state != h) {
        throw ShapeError("lstm state size " + std::to_string(state) + " vs wh " + wh.shape_str());
    }
}

void lstm_layer_forward_cached(const Tensor2& x, const Tensor2& wx, const Tensor2& wh,
                               const Tensor2& b, const Tensor2& h0, const Tensor2& c0,
                               LstmLayerCache& cache) {
    const std::size_t t_steps = x.rows();
    const std::size_t h_size = wh.rows();
    check_cell_shapes(wx, wh, b, x.cols(), h0.cols());

    cache.x = x;
    cache.h0 = h0;
    cache.c0 = c0;
    for (Tensor2* m : {&cache.i, &cache.f, &cache.g, &cache.o, &cache.c, &cache.tanh_c, &cache.h}) {
        *m = Tensor2(t_steps, h_size);
    }

    Tensor2 zx = matmul(x, wx); // input contribution for every step at once
    std::vector<double> z(4 * h_size);
    for (std::size_t t = 0; t < t_steps; ++t) {
        const double* b_row = b.row(0).data();
        const double* zx_row = zx.row(t).data();
        for (std::size_t j = 0; j < z.size(); ++j) z[j] = zx_row[j] + b_row[j];
        auto h_prev = t == 0 ? h0.row(0) : cache.h.row(t - 1);
        auto c_prev = t == 0 ? c0.row(0) : cache.c.row(t - 1);
        for (std::size_t k = 0; k < h_size; ++k) {
            const double hv = h_prev[k];
            if (hv == 0.0) continue;
            const double* w_row = wh.row(k).data();
            for (std::size_t j = 0; j < z.size(); ++j) z[j] += hv * w_row[j];
        }
        for (std::size_t k = 0; k < h_size; ++k) {
            const double iv = nn::sigmoid(z[k]);
            const double fv = nn::sigmoid(z[h_size + k]);
            const double gv = std::tanh(z[2 * h_size + k]);
            const double ov = nn::sigmoid(z[3 * h_size + k]);
            const double cv = fv * c_prev[k] + iv * gv;
            const double tc = std::tanh(cv);
            cache.i(t, k) = iv;
            cache.f(t, k) = fv;
            cache.g(t, k) = gv;
            cache.o(t, k) = ov;
            cache.c(t, k) = cv;
            cache.tanh_c(t, k) = tc;
            cache.h(t, k) = ov * tc;
        }
    }
}

struct LstmLayerBackResult {
    Tensor2 dx;  // T x F
    Tensor2 dh0; // 1 x H
    Tensor2 dc0; // 1 x H
};

// dh_seq carries upstream gradients per emitted state; dh_final/dc_final
// are extra gradients flowing into the final (h, c) from downstream
// consumers of the layer's terminal state.
LstmLayerBackResult lstm_layer_backward(const LstmLayerCache& cache, const Tensor2& wx,
                                        const Tensor2& wh, const Tensor2& dh_seq,
                                        const Tensor2& dh_final, const Tensor2& dc_final,
                                        Tensor2& dwx, Tensor2& dwh, Tensor2& db) {
    const std::size_t t_steps = cache.x.rows();
    const std::size_t h_size = wh.rows();

    // Transposed recurrent weights keep the inner loops contiguous.
    Tensor2 wht = transposed(wh);
    Tensor2 dz_all(t_steps, 4 * h_size);

    std::vector<double> carry_dh(dh_final.row(0).begin(), dh_final.row(0).end());
    std::vector<double> carry_dc(dc_final.row(0).begin(), dc_final.row(0).end());

    for (std::size_t ti = t_steps; ti-- > 0;) {
        auto c_prev = ti == 0 ? cache.c0.row(0) : cache.c.row(ti - 1);
        double* dz = dz_all.row(ti).data();
        for (std::size_t k = 0; k < h_size; ++k) {
            const double dh = dh_seq(ti, k) + carry_dh[k];
            const double iv = cache.i(ti, k);
            const double fv = cache.f(ti, k);
            const double gv = cache.g(ti, k);
            const double ov = cache.o(ti, k);
            const double tc = cache.tanh_c(ti, k);
            const double dc_tot = carry_dc[k] + dh * ov * (1.0 - tc * tc);
            const double dov = dh * tc;
            const double div = dc_tot * gv;
            const double dgv = dc_tot * iv;
            const double dfv = dc_tot * c_prev[k];
            carry_dc[k] = dc_tot * fv;
            dz[k] = div * iv * (1.0 - iv);
            dz[h_size + k] = dfv * fv * (1.0 - fv);
            dz[2 * h_size + k] = dgv * (1.0 - gv * gv);
            dz[3 * h_size + k] = dov * ov * (1.0 - ov);
        }
        std::fill(carry_dh.begin(), carry_dh.end(), 0.0);
        for (std::size_t j = 0; j < 4 * h_size; ++j) {
            const double v = dz[j];
            if (v == 0.0) continue;
            const double* wht_row = wht.row(j).data();
            for (std::size_t k = 0; k < h_size; ++k) carry_dh[k] += v * wht_row[k];
        }
    }

    // Previous-state sequence [h0; h_0; ...; h_{T-2}] for the recurrent
    // weight gradient.
    Tensor2 h_prev_all(t_steps, h_size);
    for (std::size_t k = 0; k < h_size; ++k) h_prev_all(0, k) = cache.h0(0, k);
    for (std::size_t t = 1; t < t_steps; ++t) {
        auto src = cache.h.row(t - 1);
        auto dst = h_prev_all.row(t);
        for (std::size_t k = 0; k < h_size; ++k) dst[k] = src[k];
    }

    dwx += matmul_at_b(cache.x, dz_all);
    dwh += matmul_at_b(h_prev_all, dz_all);
    {
        auto db_row = db.row(0);
        for (std::size_t t = 0; t < t_steps; ++t) {
            const double* dz = dz_all.row(t).data();
            for (std::size_t j = 0; j < 4 * h_size; ++j) db_row[j] += dz[j];
        }
    }

    LstmLayerBackResult out;
    out.dx = matmul(dz_all, transposed(wx));
    out.dh0 = Tensor2(1, h_size);
    out.dc0 = Tensor2(1, h_size);
    for (std::size_t k = 0; k < h_size; ++k) {
        out.dh0(0, k) = carry_dh[k];
        out.dc0(0, k) = carry_dc[k];
    }
    return out;
}

Tensor2 zeros_like_row(std::size_t n) { return Tensor2(1, n); }

// Everything backward needs, captured during the forward pass.
struct ForwardTrace {
    std::vector<LstmLayerCache> layers;
    std::vector<Tensor2> drop_masks;   // per rectifier+dropout stage
    Tensor2 attended;                  // processed encoder states (attention memory)
    std::vector<double> attn_weights;
    Tensor2 head_in;                   // 1 x K
    double logit = 0.0;
    double p = 0.0;
};

// Applies the rectifier (unless disabled) then dropout to a state
// sequence; records the mask for backward.
Tensor2 process_states(const Model& model, const Tensor2& states, RunMode mode,
                       std::uint64_t seed, std::size_t stage, ForwardTrace& trace) {
    Tensor2 activated =
        model.config.rectifier ? nn::activate(nn::Activation::relu, states) : states;
    auto dropped = nn::dropout(activated, model.config.dropout_rate, mode,
                               rng::mix(seed, stage));
    trace.drop_masks.push_back(std::move(dropped.mask));
    return std::move(dropped.y);
}

Tensor2 process_states_backward(const Model& model, const ForwardTrace& trace,
                                std::size_t stage, const Tensor2& raw_states,
                                const Tensor2& dprocessed) {
    Tensor2 dactivated = nn::dropout_backward(trace.drop_masks[stage], dprocessed);
    if (!model.config.rectifier) return dactivated;
    return nn::activate_backward(nn::Activation::relu, raw_states, dactivated);
}

double head_forward(const Model& model, std::vector<double> input, ForwardTrace& trace) {
    trace.head_in = Tensor2::row_vector(std::move(input));
    Tensor2 logit = nn::affine(trace.head_in, model.param("head.w"), model.param("head.b"));
    trace.logit = logit(0, 0);
    trace.p = nn::sigmoid(trace.logit);
    return trace.p;
}

Tensor2 reverse_rows(const Tensor2& m) {
    Tensor2 out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto src = m.row(m.rows() - 1 - r);
        auto dst = out.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) dst[c] = src[c];
    }
    return out;
}

std::vector<double> concat(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

double run_forward(const Model& model, const Tensor2& window, RunMode mode, std::uint64_t seed,
                   ForwardTrace& trace) {
    const ModelConfig& cfg = model.config;
    if (window.rows() != static_cast<std::size_t>(cfg.lag) ||
        window.cols() != static_cast<std::size_t>(cfg.input_features)) {
        throw ShapeError("window " + window.shape_str() + " does not match config lag " +
                         std::to_string(cfg.lag) + " x features " +
                         std::to_string(cfg.input_features));
    }

    switch (cfg.architecture) {
    case Architecture::lstm: {
        const std::size_t h = static_cast<std::size_t>(cfg.hidden_sizes[0]);
        trace.layers.resize(1);
        lstm_layer_forward_cached(window, model.param("lstm.wx"), model.param("lstm.wh"),
                                  model.param("lstm.b"), zeros_like_row(h), zeros_like_row(h),
                                  trace.layers[0]);
        auto last = trace.layers[0].h.row(window.rows() - 1);
        return head_forward(model, {last.begin(), last.end()}, trace);
    }
    case Architecture::stacked_lstm: {
        trace.layers.resize(3);
        Tensor2 input = window;
        for (std::size_t l = 0; l < 3; ++l) {
            const std::size_t h = static_cast<std::size_t>(cfg.hidden_sizes[l]);
            const std::string prefix = "lstm" + std::to_string(l);
            lstm_layer_forward_cached(input, model.param(prefix + ".wx"),
                                      model.param(prefix + ".wh"), model.param(prefix + ".b"),
                                      zeros_like_row(h), zeros_like_row(h), trace.layers[l]);
            input = process_states(model, trace.layers[l].h, mode, seed, l, trace);
        }
        auto last = input.row(input.rows() - 1);
        return head_forward(model, {last.begin(), last.end()}, trace);
    }
    case Architecture::bilstm: {
        const std::size_t h = static_cast<std::size_t>(cfg.hidden_sizes[0]);
        trace.layers.resize(2);
        lstm_layer_forward_cached(window, model.param("fwd.wx"), model.param("fwd.wh"),
                                  model.param("fwd.b"), zeros_like_row(h), zeros_like_row(h),
                                  trace.layers[0]);
        lstm_layer_forward_cached(reverse_rows(window), model.param("bwd.wx"),
                                  model.param("bwd.wh"), model.param("bwd.b"), zeros_like_row(h),
                                  zeros_like_row(h), trace.layers[1]);
        auto fwd_last = trace.layers[0].h.row(window.rows() - 1);
        auto bwd_last = trace.layers[1].h.row(window.rows() - 1);
        return head_forward(model, concat(fwd_last, bwd_last), trace);
    }
    case Architecture::seq2seq_attention: {
        const std::size_t h = static_cast<std::size_t>(cfg.hidden_sizes[0]);
        trace.layers.resize(2);
        LstmLayerCache& enc = trace.layers[0];
        lstm_layer_forward_cached(window, model.param("enc.wx"), model.param("enc.wh"),
                                  model.param("enc.b"), zeros_like_row(h), zeros_like_row(h),
                                  enc);
        trace.attended = process_states(model, enc.h, mode, seed, 0, trace);

        // Single-step decoder: zero input, carries the encoder's final
        // raw (h, c).
        Tensor2 dec_input(1, h);
        Tensor2 enc_h_final(1, h);
        Tensor2 enc_c_final(1, h);
        const std::size_t t_last = window.rows() - 1;
        for (std::size_t k = 0; k < h; ++k) {
            enc_h_final(0, k) = enc.h(t_last, k);
            enc_c_final(0, k) = enc.c(t_last, k);
        }
        lstm_layer_forward_cached(dec_input, model.param("dec.wx"), model.param("dec.wh"),
                                  model.param("dec.b"), enc_h_final, enc_c_final,
                                  trace.layers[1]);
        auto dec_h = trace.layers[1].h.row(0);
        AttentionResult att = attention(dec_h, trace.attended);
        trace.attn_weights = att.weights;
        return head_forward(model, concat(dec_h, att.context), trace);
    }
    }
    throw ConfigError("unknown architecture tag");
}

void run_backward(const Model& model, const ForwardTrace& trace, const Tensor2& window,
                  double dlogit, std::vector<Tensor2>& grads) {
    const ModelConfig& cfg = model.config;

    auto grad_of = [&](const std::string& name) -> Tensor2& {
        for (std::size_t i = 0; i < model.param_names.size(); ++i) {
            if (model.param_names[i] == name) return grads[i];
        }
        throw ConfigError("no gradient slot for '" + name + "'");
    };

    Tensor2 dlogit_t(1, 1);
    dlogit_t(0, 0) = dlogit;
    nn::AffineGrads head =
        nn::affine_backward(trace.head_in, model.param("head.w"), dlogit_t);
    grad_of("head.w") += head.dw;
    grad_of("head.b") += head.db;
    const Tensor2& dhead_in = head.dx; // 1 x K

    switch (cfg.architecture) {
    case Architecture::lstm: {
        const std::size_t h = static_cast<std::size_t>(cfg.hidden_sizes[0]);
        Tensor2 dh_seq(window.rows(), h);
        Tensor2 dh_final(1, h);
        for (std::size_t k = 0; k < h; ++k) dh_final(0, k) = dhead_in(0, k);
        lstm_layer_backward(trace.layers[0], model.param("lstm.wx"), model.param("lstm.wh"),
                            dh_seq, dh_final, zeros_like_row(h), grad_of("lstm.wx"),
                            grad_of("lstm.wh"), grad_of("lstm.b"));
        return;
    }
    case Architecture::stacked_lstm: {
        const std::size_t h_last = static_cast<std::size_t>(cfg.hidden_sizes[2]);
        Tensor2 dprocessed(window.rows(), h_last);
        for (std::size_t k = 0; k < h_last; ++k) {
            dprocessed(window.rows() - 1, k) = dhead_in(0, k);
        }
        for (std::size_t l = 3; l-- > 0;) {
            const std::size_t h = static_cast<std::size_t>(cfg.hidden_sizes[l]);
            const std::string prefix = "lstm" + std::to_string(l);
            Tensor2 dh_seq =
                process_states_backward(model, trace, l, trace.layers[l].h, dprocessed);
            auto back = lstm_layer_backward(
                trace.layers[l], model.param(prefix + ".wx"), model.param(prefix + ".wh"),
                dh_seq, zeros_like_row(h), zeros_like_row(h), grad_of(prefix + ".wx"),
                grad_of(prefix + ".wh"), grad_of(prefix + ".b"));
            dprocessed = std::move(back.dx);
        }
        return;
    }
    case Architecture::bilstm: {
        const std::size_t h = static_cast<std::size_t>(cfg.hidden_sizes[0]);
        Tensor2 dh_fwd(1, h), dh_bwd(1, h);
        for (std::size_t k = 0; k < h; ++k) {
            dh_fwd(0, k) = dhead_in(0, k);
            dh_bwd(0, k) = dhead_in(0, h + k);
        }
        Tensor2 dh_seq(window.rows(), h);
        lstm_layer_backward(trace.layers[0], model.param("fwd.wx"), model.param("fwd.wh"),
                            dh_seq, dh_fwd, zeros_like_row(h), grad_of("fwd.wx"),
                            grad_of("fwd.wh"), grad_of("fwd.b"));
        lstm_layer_backward(trace.layers[1], model.param("bwd.wx"), model.param("bwd.wh"),
                            dh_seq, dh_bwd, zeros_like_row(h), grad_of("bwd.wx"),
                            grad_of("bwd.wh"), grad_of("bwd.b"));
        return;
    }
    case Architecture::seq2seq_attention: {
        const std::size_t h = static_cast<std::size_t>(cfg.hidden_sizes[0]);
        const std::size_t t_steps = window.rows();
        auto dec_h = trace.layers[1].h.row(0);
        const auto& w = trace.attn_weights;

        std::vector<double> ddec_h(dhead_in.row(0).begin(), dhead_in.row(0).begin() + h);
        std::span<const double> dcontext{dhead_in.row(0).data() + h, h};

        // context = sum_t w_t * attended_t
        Tensor2 dattended(t_steps, h);
        std::vector<double> dw(t_steps);
        for (std::size_t t = 0; t < t_steps; ++t) {
            auto att_row = trace.attended.row(t);
            dw[t] = dot(dcontext, att_row);
            for (std::size_t k = 0; k < h; ++k) dattended(t, k) += w[t] * dcontext[k];
        }
        // softmax over dot-product scores
        double inner = 0.0;
        for (std::size_t t = 0; t < t_steps; ++t) inner += w[t] * dw[t];
        for (std::size_t t = 0; t < t_steps; ++t) {
            const double ds = w[t] * (dw[t] - inner);
            auto att_row = trace.attended.row(t);
            for (std::size_t k = 0; k < h; ++k) {
                ddec_h[k] += ds * att_row[k];
                dattended(t, k) += ds * dec_h[k];
            }
        }

        Tensor2 ddec_h_seq(1, h);
        for (std::size_t k = 0; k < h; ++k) ddec_h_seq(0, k) = ddec_h[k];
        auto dec_back = lstm_layer_backward(
            trace.layers[1], model.param("dec.wx"), model.param("dec.wh"), ddec_h_seq,
            zeros_like_row(h), zeros_like_row(h), grad_of("dec.wx"), grad_of("dec.wh"),
            grad_of("dec.b"));

        Tensor2 denc_h_seq =
            process_states_backward(model, trace, 0, trace.layers[0].h, dattended);
        lstm_layer_backward(trace.layers[0], model.param("enc.wx"), model.param("enc.wh"),
                            denc_h_seq, dec_back.dh0, dec_back.dc0, grad_of("enc.wx"),
                            grad_of("enc.wh"), grad_of("enc.b"));
        return;
    }
    }
    throw ConfigError("unknown architecture tag");
}

} // namespace

std::pair<std::vector<double>, std::vector<double>>
lstm_cell_forward(const Tensor2& wx, const Tensor2& wh, const Tensor2& b,
                  std::span<const double> x, std::span<const double> h,
                  std::span<const double> c) {
    check_cell_shapes(wx, wh, b, x.size(), h.size());
    if (c.size() != h.size()) {
        throw ShapeError("lstm cell state sizes disagree: h " + std::to_string(h.size()) +
                         " vs c " + std::to_string(c.size()));
    }
    Tensor2 x_row(1, x.size());
    for (std::size_t k = 0; k < x.size(); ++k) x_row(0, k) = x[k];
    Tensor2 h0(1, h.size()), c0(1, c.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        h0(0, k) = h[k];
        c0(0, k) = c[k];
    }
    LstmLayerCache cache;
    lstm_layer_forward_cached(x_row, wx, wh, b, h0, c0, cache);
    auto h_row = cache.h.row(0);
    auto c_row = cache.c.row(0);
    return {{h_row.begin(), h_row.end()}, {c_row.begin(), c_row.end()}};
}

Tensor2 lstm_layer_forward(const Tensor2& window, const Tensor2& wx, const Tensor2& wh,
                           const Tensor2& b) {
    const std::size_t h = wh.rows();
    LstmLayerCache cache;
    lstm_layer_forward_cached(window, wx, wh, b, Tensor2(1, h), Tensor2(1, h), cache);
    return cache.h;
}

AttentionResult attention(std::span<const double> decoder_state, const Tensor2& encoder_states) {
    if (decoder_state.size() != encoder_states.cols()) {
        throw ShapeError("attention state size " + std::to_string(decoder_state.size()) +
                         " vs encoder states " + encoder_states.shape_str());
    }
    const std::size_t t_steps = encoder_states.rows();
    Tensor2 scores(1, t_steps);
    for (std::size_t t = 0; t < t_steps; ++t) {
        scores(0, t) = dot(decoder_state, encoder_states.row(t));
    }
    Tensor2 weights = nn::activate(nn::Activation::softmax_row, scores);
    AttentionResult out;
    out.weights.assign(weights.row(0).begin(), weights.row(0).end());
    out.context.assign(encoder_states.cols(), 0.0);
    for (std::size_t t = 0; t < t_steps; ++t) {
        auto row = encoder_states.row(t);
        for (std::size_t k = 0; k < row.size(); ++k) out.context[k] += out.weights[t] * row[k];
    }
    return out;
}

double forward(const Model& model, const Tensor2& window, RunMode mode, std::uint64_t seed) {
    ForwardTrace trace;
    return run_forward(model, window, mode, seed, trace);
}

LossGrads forward_backward(const Model& model, const Tensor2& window, double label,
                           RunMode mode, std::uint64_t seed) {
    ForwardTrace trace;
    LossGrads out;
    out.prob = run_forward(model, window, mode, seed, trace);
    out.loss = nn::bce_loss(out.prob, label);
    out.grads.reserve(model.params.size());
    for (const Tensor2& p : model.params) out.grads.emplace_back(p.rows(), p.cols());
    const double dlogit = nn::bce_loss_grad(out.prob, label) * out.prob * (1.0 - out.prob);
    run_backward(model, trace, window, dlogit, out.grads);
    return out;
}

double model_grad_check(Model& model, const Tensor2& window, double label, double step) {
    auto fb = forward_backward(model, window, label, RunMode::eval, 0);
    std::vector<Tensor2*> ptrs;
    ptrs.reserve(model.params.size());
    for (Tensor2& p : model.params) ptrs.push_back(&p);
    auto loss = [&] {
        return nn::bce_loss(forward(model, window, RunMode::eval, 0), label);
    };
    return nn::grad_check(ptrs, fb.grads, loss, step);
}

} // namespace surgecast
