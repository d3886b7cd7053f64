#include "liesym/model.hpp"

namespace liesym {

const std::vector<std::pair<std::string, std::string>>& builtin_model_texts() {
    static const std::vector<std::pair<std::string, std::string>> texts{
#include "builtin_models.inc"
    };
    return texts;
}

const Model& builtin_model() {
    static const Model m = [] {
        std::string all;
        for (const auto& [name, text] : builtin_model_texts()) all += "# file " + name + "\n" + text + "\n";
        return load_model(all, "builtin");
    }();
    return m;
}

Model load_model_source(const std::string& source) {
    if (source == "builtin") return builtin_model();
    return load_model_file(source);
}

}  // namespace liesym
