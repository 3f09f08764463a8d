#include "mwsched/io.hpp"

#include "mwsched/error.hpp"

#include <expat.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>

namespace mwsched {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

namespace {

json parse_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::Schema, field + ": " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) schema_error(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(path + "." + key, "missing required field");
    return *it;
}

std::string string_field(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = member(obj, key, path);
    if (!v.is_string()) schema_error(path + "." + key, "expected a string");
    return v.get<std::string>();
}

double number_field(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = member(obj, key, path);
    if (!v.is_number()) schema_error(path + "." + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema_error(path + "." + key, "expected a finite number");
    return d;
}

const json& array_field(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = member(obj, key, path);
    if (!v.is_array()) schema_error(path + "." + key, "expected an array");
    return v;
}

} // namespace

json to_json(const WorkflowSet& ws) {
    json workflows = json::array();
    for (const auto& w : ws.workflows()) {
        json tasks = json::array();
        for (const auto& t : w.tasks()) tasks.push_back({{"id", t.id}, {"workload", t.workload}});
        json edges = json::array();
        for (const auto& e : w.edges()) edges.push_back({{"src", e.src}, {"dst", e.dst}, {"data_size", e.data_size}});
        workflows.push_back({{"id", w.id()}, {"tasks", std::move(tasks)}, {"edges", std::move(edges)}});
    }
    return json{{"workflows", std::move(workflows)}};
}

WorkflowSet workflow_set_from_json(const json& doc) {
    const auto& wfs = array_field(doc, "workflows", "$");

    // First pass: task ownership, so cross-workflow edges can be named precisely.
    std::unordered_map<std::string, std::string> owner;
    for (std::size_t g = 0; g < wfs.size(); ++g) {
        const std::string wpath = "workflows[" + std::to_string(g) + "]";
        const std::string wid = string_field(wfs[g], "id", wpath);
        const auto& tasks = array_field(wfs[g], "tasks", wpath);
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const std::string tpath = wpath + ".tasks[" + std::to_string(i) + "]";
            const std::string tid = string_field(tasks[i], "id", tpath);
            if (!owner.emplace(tid, wid).second) schema_error(tpath + ".id", "duplicate task id '" + tid + "'");
        }
    }

    std::vector<Workflow> out;
    std::set<std::string> workflow_ids;
    for (std::size_t g = 0; g < wfs.size(); ++g) {
        const std::string wpath = "workflows[" + std::to_string(g) + "]";
        const std::string wid = string_field(wfs[g], "id", wpath);
        if (!workflow_ids.insert(wid).second) schema_error(wpath + ".id", "duplicate workflow id '" + wid + "'");

        std::vector<Task> tasks;
        const auto& jt = array_field(wfs[g], "tasks", wpath);
        for (std::size_t i = 0; i < jt.size(); ++i) {
            const std::string tpath = wpath + ".tasks[" + std::to_string(i) + "]";
            Task t{string_field(jt[i], "id", tpath), number_field(jt[i], "workload", tpath)};
            if (t.workload < 0.0) schema_error(tpath + ".workload", "must be >= 0");
            tasks.push_back(std::move(t));
        }

        std::vector<Edge> edges;
        const auto& je = array_field(wfs[g], "edges", wpath);
        for (std::size_t i = 0; i < je.size(); ++i) {
            const std::string epath = wpath + ".edges[" + std::to_string(i) + "]";
            Edge e{string_field(je[i], "src", epath), string_field(je[i], "dst", epath),
                   number_field(je[i], "data_size", epath)};
            if (e.data_size < 0.0) schema_error(epath + ".data_size", "must be >= 0");
            for (const auto* end : {&e.src, &e.dst}) {
                const char* field = end == &e.src ? ".src" : ".dst";
                auto it = owner.find(*end);
                if (it == owner.end()) schema_error(epath + field, "unknown task '" + *end + "'");
                if (it->second != wid) {
                    schema_error(epath + field,
                                 "cross-workflow edge: task '" + *end + "' belongs to workflow '" + it->second + "'");
                }
            }
            if (e.src == e.dst) schema_error(epath, "self-loop on task '" + e.src + "'");
            edges.push_back(std::move(e));
        }
        out.emplace_back(wid, std::move(tasks), std::move(edges));
    }

    WorkflowSet ws(std::move(out));
    if (auto violations = validate(ws); !violations.empty()) {
        schema_error("workflows", violations.front().message);
    }
    return ws;
}

WorkflowSet load_native(const std::filesystem::path& path) {
    try {
        return workflow_set_from_json(parse_json_file(path));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Schema) throw Error(ErrorKind::Schema, path.string() + ": " + e.what());
        throw;
    }
}

void save_native(const WorkflowSet& ws, const std::filesystem::path& path) {
    write_text_file(path, to_json(ws).dump(1) + "\n");
}

json to_json(const ResourceCatalog& catalog) {
    json arr = json::array();
    for (const auto& r : catalog.resources()) {
        arr.push_back({{"id", r.id},
                       {"cpu", r.cpu},
                       {"bandwidth", r.bandwidth},
                       {"cost_per_interval", r.cost_per_interval},
                       {"billing_interval", r.billing_interval}});
    }
    return json{{"resources", std::move(arr)}};
}

ResourceCatalog catalog_from_json(const json& doc) {
    const auto& arr = array_field(doc, "resources", "$");
    std::vector<Resource> out;
    for (std::size_t r = 0; r < arr.size(); ++r) {
        const std::string p = "resources[" + std::to_string(r) + "]";
        out.push_back({string_field(arr[r], "id", p), number_field(arr[r], "cpu", p),
                       number_field(arr[r], "bandwidth", p), number_field(arr[r], "cost_per_interval", p),
                       number_field(arr[r], "billing_interval", p)});
    }
    return ResourceCatalog(std::move(out));
}

ResourceCatalog load_resources(const std::filesystem::path& path) {
    try {
        return catalog_from_json(parse_json_file(path));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Schema) throw Error(ErrorKind::Schema, path.string() + ": " + e.what());
        throw;
    }
}

void save_resources(const ResourceCatalog& catalog, const std::filesystem::path& path) {
    write_text_file(path, to_json(catalog).dump(1) + "\n");
}

// ---------------------------------------------------------------------------
// DAX

namespace {

struct DaxJob {
    std::string id;
    double runtime = 0.0;
    std::map<std::string, double> inputs;
    std::map<std::string, double> outputs;
};

struct DaxState {
    XML_Parser parser = nullptr;
    std::string source;
    std::vector<DaxJob> jobs;
    std::unordered_map<std::string, std::size_t> job_index;
    std::string adag_name;
    int depth_in_job = 0;
    std::string current_child;
    std::vector<std::pair<std::string, std::string>> links; // (parent, child)
    std::string error;

    std::string where() const {
        return source + ":" + std::to_string(XML_GetCurrentLineNumber(parser)) + ":" +
               std::to_string(XML_GetCurrentColumnNumber(parser) + 1);
    }

    void fail(const std::string& msg) {
        if (error.empty()) error = where() + ": " + msg;
        XML_StopParser(parser, XML_FALSE);
    }
};

// Strip an optional namespace prefix ("dax:job" -> "job").
std::string_view local_name(const char* name) {
    std::string_view n(name);
    if (auto pos = n.rfind(':'); pos != std::string_view::npos) n.remove_prefix(pos + 1);
    return n;
}

const char* attr(const char** atts, std::string_view key) {
    for (int i = 0; atts[i] != nullptr; i += 2) {
        if (key == atts[i]) return atts[i + 1];
    }
    return nullptr;
}

bool parse_number(const char* text, double& out) {
    if (text == nullptr) return false;
    char* end = nullptr;
    out = std::strtod(text, &end);
    if (end == text) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0' && std::isfinite(out);
}

void XMLCALL on_start(void* data, const char* name, const char** atts) {
    auto& st = *static_cast<DaxState*>(data);
    if (!st.error.empty()) return;
    const auto tag = local_name(name);

    if (tag == "adag") {
        if (const char* n = attr(atts, "name")) st.adag_name = n;
    } else if (tag == "job") {
        const char* id = attr(atts, "id");
        if (id == nullptr) return st.fail("job without id attribute");
        const char* rt = attr(atts, "runtime");
        DaxJob job{id, 0.0, {}, {}};
        if (rt == nullptr) return st.fail("job '" + job.id + "' lacks the required runtime attribute");
        if (!parse_number(rt, job.runtime) || job.runtime < 0.0) {
            return st.fail("job '" + job.id + "' has invalid runtime '" + rt + "'");
        }
        if (!st.job_index.emplace(job.id, st.jobs.size()).second) {
            return st.fail("duplicate job id '" + job.id + "'");
        }
        st.jobs.push_back(std::move(job));
        st.depth_in_job = 1;
    } else if (tag == "uses") {
        if (st.depth_in_job == 0) return; // <uses> outside a job (e.g. under <file>) carries no edge data
        const char* file = attr(atts, "file");
        if (file == nullptr) file = attr(atts, "name");
        const char* link = attr(atts, "link");
        if (file == nullptr || link == nullptr) return st.fail("uses element needs file/name and link attributes");
        double size = 0.0;
        if (const char* sz = attr(atts, "size"); sz != nullptr && (!parse_number(sz, size) || size < 0.0)) {
            return st.fail("uses element has invalid size '" + std::string(sz) + "'");
        }
        auto& job = st.jobs.back();
        const std::string_view l(link);
        if (l == "input") {
            job.inputs[file] = size;
        } else if (l == "output") {
            job.outputs[file] = size;
        } else if (l == "inout") {
            job.inputs[file] = size;
            job.outputs[file] = size;
        }
    } else if (tag == "child") {
        const char* ref = attr(atts, "ref");
        if (ref == nullptr) return st.fail("child element without ref attribute");
        if (!st.job_index.contains(ref)) return st.fail("child references unknown job '" + std::string(ref) + "'");
        st.current_child = ref;
    } else if (tag == "parent") {
        const char* ref = attr(atts, "ref");
        if (ref == nullptr) return st.fail("parent element without ref attribute");
        if (st.current_child.empty()) return st.fail("parent element outside child");
        if (!st.job_index.contains(ref)) return st.fail("parent references unknown job '" + std::string(ref) + "'");
        st.links.emplace_back(ref, st.current_child);
    } else if (st.depth_in_job > 0) {
        ++st.depth_in_job;
    }
}

void XMLCALL on_end(void* data, const char* name) {
    auto& st = *static_cast<DaxState*>(data);
    const auto tag = local_name(name);
    if (tag == "job") {
        st.depth_in_job = 0;
    } else if (tag == "child") {
        st.current_child.clear();
    } else if (st.depth_in_job > 1 && tag != "uses") {
        --st.depth_in_job;
    }
}

} // namespace

Workflow parse_dax(std::string_view xml, std::string_view source_name, std::string_view task_prefix) {
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"), &XML_ParserFree);
    if (!parser) throw Error(ErrorKind::Io, "cannot allocate XML parser");
    DaxState st;
    st.parser = parser.get();
    st.source = std::string(source_name);
    XML_SetUserData(parser.get(), &st);
    XML_SetElementHandler(parser.get(), on_start, on_end);

    const auto status = XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE);
    if (!st.error.empty()) throw Error(ErrorKind::Parse, st.error);
    if (status != XML_STATUS_OK) {
        throw Error(ErrorKind::Parse, st.where() + ": " + XML_ErrorString(XML_GetErrorCode(parser.get())));
    }

    const std::string prefix(task_prefix);
    std::vector<Task> tasks;
    tasks.reserve(st.jobs.size());
    for (const auto& j : st.jobs) tasks.push_back({prefix + j.id, j.runtime});

    // Aggregate duplicate (parent, child) declarations into one edge.
    std::map<std::pair<std::string, std::string>, double> sizes;
    for (const auto& [parent, child] : st.links) {
        if (parent == child) {
            throw Error(ErrorKind::Parse, st.source + ": job '" + parent + "' is declared as its own parent");
        }
        auto key = std::make_pair(parent, child);
        if (sizes.contains(key)) continue;
        const auto& p = st.jobs[st.job_index.at(parent)];
        const auto& c = st.jobs[st.job_index.at(child)];
        double ds = 0.0;
        for (const auto& [file, size] : p.outputs) {
            if (auto it = c.inputs.find(file); it != c.inputs.end()) ds += std::max(size, it->second);
        }
        sizes.emplace(key, ds);
    }
    std::vector<Edge> edges;
    edges.reserve(sizes.size());
    for (const auto& [key, ds] : sizes) edges.push_back({prefix + key.first, prefix + key.second, ds});

    std::string id = st.adag_name;
    if (id.empty()) id = std::filesystem::path(std::string(source_name)).stem().string();
    Workflow w(id, std::move(tasks), std::move(edges));
    if (auto v = validate(w); !v.empty()) throw Error(ErrorKind::Parse, st.source + ": " + v.front().message);
    return w;
}

Workflow load_dax(const std::filesystem::path& path, std::string_view task_prefix) {
    return parse_dax(read_text_file(path), path.string(), task_prefix);
}

WorkflowSet load_dax_set(std::span<const std::filesystem::path> paths) {
    std::vector<Workflow> out;
    std::set<std::string> used;
    for (const auto& p : paths) {
        Workflow probe = load_dax(p);
        std::string id = probe.id();
        for (int k = 2; used.contains(id); ++k) id = probe.id() + "-" + std::to_string(k);
        used.insert(id);
        Workflow w = load_dax(p, id + "/");
        out.emplace_back(id, std::vector<Task>(w.tasks().begin(), w.tasks().end()),
                         std::vector<Edge>(w.edges().begin(), w.edges().end()));
    }
    return WorkflowSet(std::move(out));
}

} // namespace mwsched
