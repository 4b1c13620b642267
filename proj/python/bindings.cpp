#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "unigen/blueprint.hpp"
#include "unigen/debugging.hpp"
#include "unigen/eval.hpp"
#include "unigen/generation.hpp"
#include "unigen/llm.hpp"

namespace py = pybind11;
using namespace unigen;

namespace {

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

GameBlueprint blueprint_of(const std::string& text) {
    return with_naming_defaults(parse_blueprint(std::string_view(text)).blueprint);
}

py::list diagnostics(const ValidationReport& report) {
    return to_python(to_json(report));
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "UniGen pipeline core";

    static py::exception<Error> error_type(m, "UnigenError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
            exc.attr("code") = e.code();
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<Percent>(m, "Percent")
        .def_readonly("tenths", &Percent::tenths)
        .def_property_readonly("value", &Percent::value)
        .def("__str__", &Percent::str)
        .def("__repr__", [](const Percent& p) { return "Percent(" + p.str() + ")"; });

    m.def("completeness", py::overload_cast<long long, long long>(&completeness), py::arg("passed"), py::arg("total"));
    m.def("improvement", py::overload_cast<double, double>(&improvement), py::arg("manual"), py::arg("assisted"));
    m.def("matrix_completeness", [](const std::string& text, bool csv) {
        return completeness(csv ? parse_matrix_csv(text, "") : parse_matrix_json(text));
    }, py::arg("text"), py::arg("csv") = false);

    m.def("parse_blueprint", [](const std::string& text) {
        return to_python(nlohmann::json::parse(canonical_serialize(blueprint_of(text))));
    }, py::arg("text"));
    m.def("validate_blueprint", [](const std::string& text) {
        return diagnostics(validate(parse_blueprint(std::string_view(text)).blueprint));
    }, py::arg("text"));
    m.def("canonical_serialize", [](const std::string& text) {
        return canonical_serialize(parse_blueprint(std::string_view(text)).blueprint);
    }, py::arg("text"));
    m.def("blueprint_hash", [](const std::string& text) {
        return blueprint_hash(parse_blueprint(std::string_view(text)).blueprint);
    }, py::arg("text"));

    m.def("plan_script_set", [](const std::string& text) {
        py::list out;
        for (const auto& plan : plan_script_set(blueprint_of(text))) out.append(to_python(to_json(plan)));
        return out;
    }, py::arg("blueprint"));
    m.def("template_generate", [](const std::string& text) {
        const GameBlueprint bp = blueprint_of(text);
        py::dict out;
        for (const auto& plan : plan_script_set(bp)) {
            if (plan.kind != BehaviorKind::Custom) out[py::str(plan.type_name)] = template_generate(plan, bp).source;
        }
        return out;
    }, py::arg("blueprint"), "Sources for every non-custom script, keyed by type name.");
    m.def("validate_scripts", [](const std::string& text, const std::map<std::string, std::string>& sources) {
        std::vector<ScriptArtifact> artifacts;
        for (const auto& [type, source] : sources) artifacts.push_back(make_artifact(type, ScriptRole::Runtime, source));
        return diagnostics(validate_scripts(artifacts, blueprint_of(text)));
    }, py::arg("blueprint"), py::arg("sources"));

    m.def("parse_compile_log", [](const std::string& text) {
        py::list out;
        for (const auto& d : parse_compile_log(text)) out.append(to_python(to_json(d)));
        return out;
    }, py::arg("text"));
    m.def("extract_json", [](const std::string& text) { return to_python(extract_json(text)); }, py::arg("text"));
}
