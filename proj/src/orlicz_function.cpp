#include "supernorm/orlicz_function.hpp"

#include <stdexcept>

namespace supernorm {

namespace {

// constants of one class-L term, precomputed once
struct LTerm {
    double a, b, ap, bp; // a^p, b^p
};

} // namespace

struct OrliczFunction::Impl {
    Repr repr = Repr::ClosedForm;
    std::string name;

    // closed form
    std::function<double(double)> cf_value, cf_d1, cf_d2;
    double power_p = 0.0; // > 0 when this is the named power form t^p

    // hinge sum
    std::vector<Hinge> hinges;

    // smoothed sum
    std::vector<SmoothTerm> terms;
    double p = 0.0;
    // cached aggregates: all H terms collapse into ch * t^p, class-L terms
    // with b = 0 collapse into a linear coefficient
    double ch = 0.0;
    double clin = 0.0;
    std::vector<LTerm> lterms;
};

OrliczFunction OrliczFunction::power(double p) {
    if (p < 1.0) throw std::invalid_argument("power Orlicz function needs p >= 1");
    auto impl = std::make_shared<Impl>();
    impl->repr = Repr::ClosedForm;
    impl->name = "power";
    impl->power_p = p;
    impl->cf_value = [p](double t) { return std::pow(t, p); };
    impl->cf_d1 = [p](double t) { return p == 1.0 ? 1.0 : p * std::pow(t, p - 1.0); };
    impl->cf_d2 = [p](double t) {
        if (p == 1.0) return 0.0;
        if (p == 2.0) return 2.0;
        return p * (p - 1.0) * std::pow(t, p - 2.0);
    };
    return OrliczFunction(impl);
}

OrliczFunction OrliczFunction::custom(std::string name, std::function<double(double)> value,
                                      std::function<double(double)> d1,
                                      std::function<double(double)> d2) {
    auto impl = std::make_shared<Impl>();
    impl->repr = Repr::ClosedForm;
    impl->name = std::move(name);
    impl->cf_value = std::move(value);
    impl->cf_d1 = std::move(d1);
    impl->cf_d2 = std::move(d2);
    return OrliczFunction(impl);
}

OrliczFunction OrliczFunction::hinge_sum(std::vector<Hinge> hinges) {
    for (const auto& h : hinges)
        if (h.a < 0.0 || h.b < 0.0) throw std::invalid_argument("hinge needs a, b >= 0");
    auto impl = std::make_shared<Impl>();
    impl->repr = Repr::HingeSum;
    impl->name = "hinge_sum";
    impl->hinges = std::move(hinges);
    return OrliczFunction(impl);
}

OrliczFunction OrliczFunction::smoothed_sum(std::vector<SmoothTerm> terms, double p) {
    if (p < 1.0) throw std::invalid_argument("smoothed sum needs p >= 1");
    auto impl = std::make_shared<Impl>();
    impl->repr = Repr::SmoothedSum;
    impl->name = "smoothed_sum";
    impl->p = p;
    impl->terms = std::move(terms);
    for (const auto& t : impl->terms) {
        if (t.a < 0.0 || t.b < 0.0) throw std::invalid_argument("smooth term needs a, b >= 0");
        if (t.a == 0.0) continue;
        if (t.high) {
            impl->ch += 2.0 * std::pow(2.0 * t.a / (t.b + 1.0), p);
        } else if (t.b == 0.0) {
            impl->clin += t.a;
        } else {
            impl->lterms.push_back({t.a, t.b, std::pow(t.a, p), std::pow(t.b, p)});
        }
    }
    return OrliczFunction(impl);
}

double OrliczFunction::value(double t) const {
    const Impl& im = *impl_;
    switch (im.repr) {
    case Repr::ClosedForm:
        return im.cf_value(t);
    case Repr::HingeSum: {
        double s = 0.0;
        for (const auto& h : im.hinges) s += std::max(0.0, h.a * t - h.b);
        return s;
    }
    case Repr::SmoothedSum: {
        double tp = (im.ch > 0.0 || !im.lterms.empty()) ? std::pow(t, im.p) : 0.0;
        double s = im.ch * tp + im.clin * t;
        for (const auto& lt : im.lterms) s += std::pow(lt.bp + lt.ap * tp, 1.0 / im.p) - lt.b;
        return s;
    }
    }
    return 0.0;
}

double OrliczFunction::d1(double t) const {
    const Impl& im = *impl_;
    switch (im.repr) {
    case Repr::ClosedForm:
        return im.cf_d1(t);
    case Repr::HingeSum: {
        // right derivative, with a tiny slack so kink points take the upper slope
        double s = 0.0;
        for (const auto& h : im.hinges)
            if (h.a * t >= h.b * (1.0 - 1e-12)) s += h.a;
        return s;
    }
    case Repr::SmoothedSum: {
        const double p = im.p;
        double s = im.clin;
        if (im.ch > 0.0) s += im.ch * p * std::pow(t, p - 1.0);
        if (!im.lterms.empty() && t > 0.0) {
            double tp = std::pow(t, p);
            for (const auto& lt : im.lterms)
                s += lt.ap * std::pow(t, p - 1.0) * std::pow(lt.bp + lt.ap * tp, 1.0 / p - 1.0);
        }
        return s;
    }
    }
    return 0.0;
}

double OrliczFunction::d2(double t) const {
    const Impl& im = *impl_;
    switch (im.repr) {
    case Repr::ClosedForm:
        return im.cf_d2(t);
    case Repr::HingeSum:
        throw std::invalid_argument("hinge sums are not twice differentiable");
    case Repr::SmoothedSum: {
        const double p = im.p;
        double s = 0.0;
        if (im.ch > 0.0) s += im.ch * p * (p - 1.0) * std::pow(t, p - 2.0);
        if (!im.lterms.empty() && t > 0.0) {
            double tp = std::pow(t, p);
            for (const auto& lt : im.lterms) {
                double base = lt.bp + lt.ap * tp;
                s += (p - 1.0) * lt.ap * std::pow(t, p - 2.0) * std::pow(base, 1.0 / p - 1.0);
                s -= (p - 1.0) * lt.ap * lt.ap * std::pow(t, 2.0 * p - 2.0) *
                     std::pow(base, 1.0 / p - 2.0);
            }
        }
        return s;
    }
    }
    return 0.0;
}

OrliczFunction::Repr OrliczFunction::repr() const { return impl_->repr; }

bool OrliczFunction::twice_differentiable() const { return impl_->repr != Repr::HingeSum; }

double OrliczFunction::smoothing_exponent() const { return impl_->p; }

const std::vector<OrliczFunction::Hinge>& OrliczFunction::hinges() const {
    if (impl_->repr != Repr::HingeSum) throw std::invalid_argument("not a hinge sum");
    return impl_->hinges;
}

const std::vector<OrliczFunction::SmoothTerm>& OrliczFunction::terms() const {
    if (impl_->repr != Repr::SmoothedSum) throw std::invalid_argument("not a smoothed sum");
    return impl_->terms;
}

const std::string& OrliczFunction::name() const { return impl_->name; }

nlohmann::json OrliczFunction::to_json() const {
    const Impl& im = *impl_;
    nlohmann::json j;
    switch (im.repr) {
    case Repr::ClosedForm:
        if (im.power_p <= 0.0)
            throw std::invalid_argument("custom closed-form Orlicz function is not serializable");
        j["repr"] = "power";
        j["p"] = im.power_p;
        break;
    case Repr::HingeSum: {
        j["repr"] = "hinge_sum";
        auto arr = nlohmann::json::array();
        for (const auto& h : im.hinges) arr.push_back({h.a, h.b});
        j["hinges"] = arr;
        break;
    }
    case Repr::SmoothedSum: {
        j["repr"] = "smoothed_sum";
        j["p"] = im.p;
        auto arr = nlohmann::json::array();
        for (const auto& t : im.terms)
            arr.push_back({{"class", t.high ? "H" : "L"}, {"a", t.a}, {"b", t.b}});
        j["terms"] = arr;
        break;
    }
    }
    return j;
}

OrliczFunction OrliczFunction::from_json(const nlohmann::json& j) {
    const std::string repr = j.at("repr").get<std::string>();
    if (repr == "power") return power(j.at("p").get<double>());
    if (repr == "hinge_sum") {
        std::vector<Hinge> hs;
        for (const auto& e : j.at("hinges"))
            hs.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
        return hinge_sum(std::move(hs));
    }
    if (repr == "smoothed_sum") {
        std::vector<SmoothTerm> ts;
        for (const auto& e : j.at("terms"))
            ts.push_back({e.at("class").get<std::string>() == "H", e.at("a").get<double>(),
                          e.at("b").get<double>()});
        return smoothed_sum(std::move(ts), j.at("p").get<double>());
    }
    throw std::invalid_argument("unknown Orlicz representation: " + repr);
}

} // namespace supernorm
